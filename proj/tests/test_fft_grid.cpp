#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pbec/fft.hpp"
#include "pbec/grid.hpp"

using namespace pbec;
using Catch::Approx;

namespace {
std::vector<std::string> captured;
void capture(const std::string& m) { captured.push_back(m); }
}  // namespace

TEST_CASE("fft round trip and Parseval") {
  const int n = 256;
  Fft plan(n);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cplx> a(n), orig;
  for (cplx& v : a) v = cplx(u(rng), u(rng));
  orig = a;

  double norm_x = 0;
  for (const cplx& v : a) norm_x += std::norm(v);
  plan.forward(a.data());
  double norm_k = 0;
  for (const cplx& v : a) norm_k += std::norm(v);
  CHECK(norm_k / n == Approx(norm_x).epsilon(1e-12));

  plan.inverse(a.data());
  double err = 0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(a[i] - orig[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("fft of a plane wave is a single bin") {
  const int n = 64;
  Fft plan(n);
  const int mode = 5;
  std::vector<cplx> a(n);
  for (int i = 0; i < n; ++i) {
    const double ph = constants::two_pi * mode * i / n;
    a[i] = cplx(std::cos(ph), std::sin(ph));
  }
  plan.forward(a.data());
  for (int i = 0; i < n; ++i) {
    if (i == mode)
      CHECK(std::abs(a[i] - cplx(n, 0)) < 1e-10);
    else
      CHECK(std::abs(a[i]) < 1e-10);
  }
}

TEST_CASE("fft rejects non power-of-two lengths") {
  CHECK_THROWS_AS(Fft(48), std::invalid_argument);
}

TEST_CASE("2d transform matches two nested 1d passes") {
  const int n = 32;
  Fft plan(n);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cplx> a(static_cast<size_t>(n) * n);
  for (cplx& v : a) v = cplx(u(rng), u(rng));
  std::vector<cplx> b = a;

  fft2(a.data(), n, plan, false);
  fft2(a.data(), n, plan, true);
  double err = 0;
  for (size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("fft wavenumbers follow the wrap-around convention") {
  const int n = 8;
  const double dx = 0.5;
  CHECK(fft_wavenumber(0, n, dx) == 0.0);
  CHECK(fft_wavenumber(1, n, dx) == Approx(constants::two_pi / (n * dx)));
  CHECK(fft_wavenumber(n / 2, n, dx) == Approx(-constants::pi / dx));
  CHECK(fft_wavenumber(n - 1, n, dx) == Approx(-constants::two_pi / (n * dx)));
}

TEST_CASE("grid size constraints") {
  CHECK_THROWS_AS(ComplexField2D(48, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(ComplexField2D(16, 1e-4), std::invalid_argument);
  ComplexField2D f(32, 1e-4);
  CHECK(f.dx == Approx(1e-4 / 32));
}

TEST_CASE("mirror profile to potential") {
  PhysicalParams p;
  p.lambda_vac = 580e-9;
  p.n_L = 1.33;
  p.L0 = 2e-6;
  p.delta_omega = 0.0;
  const int n = 64;
  const double extent = 100e-6;

  SECTION("flat mirror gives zero potential") {
    std::vector<double> dL(static_cast<size_t>(n) * n, 0.0);
    const PotentialMap V = potential_from_mirror(dL, n, extent, p);
    for (double v : V.v) CHECK(v == 0.0);
  }

  SECTION("spherical mirror reproduces the analytic harmonic trap") {
    // delta L = -r^2 / 2R  ->  harmonic with Omega0^2 = c^2 / (n_L^2 L0 R)
    const double R = 1.0;  // mirror radius of curvature [m]
    PhysicalParams ph = p;
    ph.Omega0 = constants::c_light / (p.n_L * std::sqrt(p.L0 * R));
    const PotentialMap Vref = harmonic_potential(n, extent, ph);

    std::vector<double> dL(static_cast<size_t>(n) * n);
    PotentialMap probe(n, extent, PotentialSource::mirror_profile);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double x = probe.coord(ix), y = probe.coord(iy);
        dL[static_cast<size_t>(iy) * n + ix] = -(x * x + y * y) / (2.0 * R);
      }
    const PotentialMap V = potential_from_mirror(dL, n, extent, p);
    for (size_t i = 0; i < V.v.size(); ++i) {
      if (Vref.v[i] == 0.0)
        CHECK(V.v[i] == 0.0);
      else
        CHECK(V.v[i] == Approx(Vref.v[i]).epsilon(1e-9));
    }
  }

  SECTION("uniform length offset shifts the potential by a constant") {
    const double eta = 0.3;
    const double off = p.lambda_vac / (2.0 * p.q) * eta;
    std::vector<double> dL(static_cast<size_t>(n) * n, off);
    const PotentialMap V = potential_from_mirror(dL, n, extent, p);
    const double expect = -optical_omega(p) * off / p.L0;
    for (double v : V.v) CHECK(v == Approx(expect).epsilon(1e-14));
  }

  SECTION("non-finite profiles are rejected") {
    std::vector<double> dL(static_cast<size_t>(n) * n, 0.0);
    dL[5] = std::nan("");
    CHECK_THROWS_AS(potential_from_mirror(dL, n, extent, p), std::invalid_argument);
  }

  SECTION("deep profiles warn about the linear-phase regime") {
    WarnHandler prev = warn_handler();
    captured.clear();
    warn_handler() = &capture;
    std::vector<double> dL(static_cast<size_t>(n) * n, p.lambda_vac / 5.0);
    potential_from_mirror(dL, n, extent, p);
    warn_handler() = prev;
    REQUIRE(captured.size() == 1);
  }

  SECTION("mirror sign: an indentation that lengthens the cavity forms a trap") {
    std::vector<double> dL(static_cast<size_t>(n) * n, 0.0);
    dL[static_cast<size_t>(n / 2) * n + n / 2] = 10e-9;  // locally longer cavity
    const PotentialMap V = potential_from_mirror(dL, n, extent, p);
    CHECK(V.at(n / 2, n / 2) < 0.0);
  }
}

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pbec/fft.hpp"
#include "pbec/params.hpp"

namespace pbec {

// Square periodic grid of complex field amplitudes psi(x,y), units
// sqrt(photons)/m. Storage is row-major, psi[iy*n + ix]; the trap center sits
// at index n/2 so x_i = (i - n/2) * dx.
struct ComplexField2D {
  int n = 0;
  double extent = 0;  // physical side length [m]
  double dx = 0;
  std::vector<cplx> psi;

  ComplexField2D() = default;
  ComplexField2D(int n_, double extent_) : n(n_), extent(extent_), dx(extent_ / n_), psi(static_cast<size_t>(n_) * n_) {
    if (!is_power_of_two(n) || n < 32)
      throw std::invalid_argument("ComplexField2D: grid size must be a power of two, >= 32");
    if (!(extent > 0)) throw std::invalid_argument("ComplexField2D: extent must be > 0");
  }

  double coord(int i) const { return (i - n / 2) * dx; }
  cplx& at(int ix, int iy) { return psi[static_cast<size_t>(iy) * n + ix]; }
  const cplx& at(int ix, int iy) const { return psi[static_cast<size_t>(iy) * n + ix]; }

  // Total particle number: integral of |psi|^2 dx dy. Row partials are summed
  // in index order so the result does not depend on the worker count.
  double particle_number() const {
    double total = 0;
    for (int iy = 0; iy < n; ++iy) {
      double row = 0;
      const cplx* p = psi.data() + static_cast<size_t>(iy) * n;
      for (int ix = 0; ix < n; ++ix) row += std::norm(p[ix]);
      total += row;
    }
    return total * dx * dx;
  }

  double max_density() const {
    double m = 0;
    for (const cplx& v : psi) m = std::max(m, std::norm(v));
    return m;
  }

  double central_density() const { return std::norm(at(n / 2, n / 2)); }
};

enum class PotentialSource { analytic_harmonic, mirror_profile };

// Real-valued trap landscape V(x,y)/hbar on the same grid, units rad/s.
struct PotentialMap {
  int n = 0;
  double extent = 0;
  double dx = 0;
  PotentialSource source = PotentialSource::analytic_harmonic;
  std::vector<double> v;  // rad/s

  PotentialMap() = default;
  PotentialMap(int n_, double extent_, PotentialSource src)
      : n(n_), extent(extent_), dx(extent_ / n_), source(src), v(static_cast<size_t>(n_) * n_, 0.0) {}

  double coord(int i) const { return (i - n / 2) * dx; }
  double& at(int ix, int iy) { return v[static_cast<size_t>(iy) * n + ix]; }
  double at(int ix, int iy) const { return v[static_cast<size_t>(iy) * n + ix]; }

  double max_value() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

// V(r) = (1/2) m Omega0^2 r^2 / hbar, centred on the grid.
inline PotentialMap harmonic_potential(int n, double extent, const PhysicalParams& p) {
  PotentialMap V(n, extent, PotentialSource::analytic_harmonic);
  const double m = effective_mass(p);
  const double coeff = 0.5 * m * p.Omega0 * p.Omega0 / constants::hbar;
  for (int iy = 0; iy < n; ++iy) {
    const double y = V.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = V.coord(ix);
      V.at(ix, iy) = coeff * (x * x + y * y);
    }
  }
  return V;
}

// Mirror-profile potential: V/hbar = -omega * (deltaL/L0 - delta_omega/omega).
// A local increase of the cavity length lowers the potential (forms a trap).
// The linear-phase treatment assumes |deltaL| << lambda; beyond lambda/10 a
// warning is emitted.
inline PotentialMap potential_from_mirror(const std::vector<double>& deltaL, int n, double extent,
                                          const PhysicalParams& p) {
  if (deltaL.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("potential_from_mirror: grid size mismatch");
  const double w = optical_omega(p);
  PotentialMap V(n, extent, PotentialSource::mirror_profile);
  double worst = 0;
  for (size_t i = 0; i < deltaL.size(); ++i) {
    if (!std::isfinite(deltaL[i])) throw std::invalid_argument("potential_from_mirror: non-finite deltaL");
    worst = std::max(worst, std::abs(deltaL[i]));
    V.v[i] = -w * (deltaL[i] / p.L0 - p.delta_omega / w);
  }
  if (worst > p.lambda_vac / 10.0)
    warn("potential_from_mirror: |deltaL| exceeds lambda/10, outside the linear-phase regime");
  return V;
}

// Thomas-Fermi radius sqrt(2 mu_J / m) / Omega0 [m]; harmonic-oscillator
// length as the fallback scale when interactions vanish.
inline double tf_radius(const PhysicalParams& p) {
  const double mu_j = mu_thomas_fermi_joule(p);
  return std::sqrt(2.0 * mu_j / effective_mass(p)) / p.Omega0;
}

inline double oscillator_length(const PhysicalParams& p) {
  return std::sqrt(constants::hbar / (effective_mass(p) * p.Omega0));
}

// Default box size: at least 4 TF radii and comfortably wider than the
// non-interacting ground state.
inline double default_extent(const PhysicalParams& p) {
  return std::max(4.0 * tf_radius(p), 12.0 * oscillator_length(p));
}

}  // namespace pbec

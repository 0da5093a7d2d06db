#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "pbec/params.hpp"
#include "pbec/spectrum_grid.hpp"

// Retarded response of the homogeneous driven condensate and the open-system
// incoherent photoluminescence. All energies in rad/s.

namespace pbec {

// Bogoliubov dispersion xi = sqrt(eps (eps + 2 mu)) and quasiparticle weights
// u^2 = (eps + mu + xi)/(2 xi), v^2 = u^2 - 1. The identity u^2 - v^2 = 1 is
// kept exact by construction.
struct BogoliubovPoint {
  double eps_k;  // rad/s
  double xi_k;   // rad/s
  double u2;
  double v2;
};

inline BogoliubovPoint bogoliubov_point(double k, double mu, const PhysicalParams& p) {
  BogoliubovPoint b{};
  b.eps_k = eps_k(k, p);
  b.xi_k = bogoliubov_xi(b.eps_k, mu);
  b.v2 = (b.eps_k + mu - b.xi_k) / (2.0 * b.xi_k);
  b.u2 = 1.0 + b.v2;
  return b;
}

using Mat2c = std::array<std::array<std::complex<double>, 2>, 2>;

struct GreenResult {
  Mat2c G;        // [s] per entry
  bool pole_hit;  // gamma = 0 and omega exactly on a Bogoliubov pole
};

// Fourier-space inverse of the Bogoliubov operator for the homogeneous
// driven condensate:
//
//   G = 1 / ( w (w + 2 i g) - eps (eps + 2 mu) ) *
//       [ mu + eps + w + i g     -mu + i g        ]
//       [ -mu - i g               mu + eps - w + i g ]
//
// with g = gamma_net. At gamma = 0 the determinant has real zeros at
// w = +-xi; those evaluate to infinite entries and are flagged.
inline GreenResult green_retarded(double k, double omega, double mu, double gamma_net,
                                  const PhysicalParams& p) {
  const double eps = eps_k(k, p);
  const std::complex<double> ig(0.0, gamma_net);
  const std::complex<double> denom =
      std::complex<double>(omega, 0.0) * std::complex<double>(omega, 2.0 * gamma_net) -
      eps * (eps + 2.0 * mu);
  GreenResult r{};
  r.pole_hit = (denom == std::complex<double>(0.0, 0.0));
  const std::complex<double> inv = 1.0 / denom;  // +-inf components on a pole hit
  r.G[0][0] = (mu + eps + omega + ig) * inv;
  r.G[0][1] = (-mu + ig) * inv;
  r.G[1][0] = (-mu - ig) * inv;
  r.G[1][1] = (mu + eps - omega + ig) * inv;
  return r;
}

// Spectral weight of the open model [s]. Sign convention: the omega > 0
// quasiparticle branch carries positive weight (integrating to u^2) and the
// omega < 0 ghost branch negative weight (-v^2), so the full frequency
// integral is u^2 - v^2 = 1.
inline double spectral_weight_open(double k, double omega, double mu, double gamma_net,
                                   const PhysicalParams& p) {
  const GreenResult r = green_retarded(k, omega, mu, gamma_net, p);
  return -2.0 * r.G[0][0].imag();
}

namespace detail {

// Open-model photoluminescence density at one (eps, omega) point:
//   P = [4 / (e^{hbar w / kB T} - 1)] * g (eps+w)(eps+2mu+w)
//       / [ 4 g^2 w^2 + (eps^2 + 2 eps mu - w^2)^2 ]
// Between the ghost branch and w = 0 the expression dips slightly negative
// (Lorentzian leakage against the negative Bose factor); clamped to zero to
// honour the non-negativity contract.
inline double pl_open_point(double eps, double omega, double mu, double gamma_net, double T) {
  const double bose = 4.0 / std::expm1(constants::hbar * omega / (constants::k_boltzmann * T));
  const double num = gamma_net * (eps + omega) * (eps + 2.0 * mu + omega);
  const double a = eps * eps + 2.0 * eps * mu - omega * omega;
  const double den = 4.0 * gamma_net * gamma_net * omega * omega + a * a;
  return std::max(bose * num / den, 0.0);
}

}  // namespace detail

// Open-system photoluminescence on the full grid. The omega = 0 row hits the
// simple pole of the Bose factor; it is evaluated at +-half the local grid
// spacing and averaged (the condensate's coherent delta contribution is
// excluded by construction).
inline SpectrumGrid pl_open(std::vector<double> k_axis, std::vector<double> omega_axis,
                            const PhysicalParams& p, double mu, double gamma_net, double T) {
  if (!(T > 0)) throw std::invalid_argument("pl_open: T must be > 0");
  if (!(gamma_net > 0)) throw std::invalid_argument("pl_open: gamma_net must be > 0");
  SpectrumGrid g;
  g.k_axis = std::move(k_axis);
  g.omega_axis = std::move(omega_axis);
  g.values.assign(g.k_axis.size() * g.omega_axis.size(), 0.0);
  const int nk = g.nk(), nw = g.nw();
  std::vector<double> eps(nk);
  for (int ik = 0; ik < nk; ++ik) eps[ik] = eps_k(g.k_axis[ik], p);
  parallel_for(nw, [&](long iw) {
    const double w = g.omega_axis[iw];
    for (int ik = 0; ik < nk; ++ik) {
      double v;
      if (w == 0.0) {
        const double dw_lo = (iw > 0) ? g.omega_axis[iw] - g.omega_axis[iw - 1]
                                      : g.omega_axis[iw + 1] - g.omega_axis[iw];
        const double dw_hi = (iw + 1 < nw) ? g.omega_axis[iw + 1] - g.omega_axis[iw] : dw_lo;
        v = 0.5 * (detail::pl_open_point(eps[ik], -0.5 * dw_lo, mu, gamma_net, T) +
                   detail::pl_open_point(eps[ik], 0.5 * dw_hi, mu, gamma_net, T));
      } else {
        v = detail::pl_open_point(eps[ik], w, mu, gamma_net, T);
      }
      g.at(ik, static_cast<int>(iw)) = v;
    }
  });
  g.validate();
  return g;
}

}  // namespace pbec

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbec/open_spectrum.hpp"
#include "pbec/params.hpp"
#include "pbec/quadrature.hpp"
#include "pbec/spectrum_grid.hpp"

// Closed-system photoluminescence with trap inhomogeneity treated in the
// local density approximation: a local chemical potential mu'(r) = mu - V(r),
// Lorentzian-broadened local Bogoliubov weights, and a radial integral over
// the condensate.

namespace pbec {

struct LocalEnvironment {
  double r = 0;         // radius [m]
  double mu_local = 0;  // mu - V(r) [rad/s]
  double V_r = 0;       // potential [rad/s]
};

// Local Bogoliubov energy sqrt(eps (eps + 2 mu')), with mu' clamped at zero
// outside the cloud so the free-particle branch continues smoothly.
inline double local_dispersion(double eps, const LocalEnvironment& env) {
  if (!(eps >= 0)) throw std::invalid_argument("local_dispersion: eps must be >= 0");
  return bogoliubov_xi(eps, env.mu_local);
}

// Unit-area Lorentzian of half-width kappa.
inline double lorentzian(double x, double kappa) {
  return (kappa / constants::pi) / (x * x + kappa * kappa);
}

// Local closed-model spectral weight [s]:
//   W = u^2 L(w - xi) - v^2 L(w + xi)
// rewritten as
//   W = (L(w-xi) + L(w+xi))/2 + (eps + mu') * 2 w kappa/pi
//                                / ([(w-xi)^2+k^2][(w+xi)^2+k^2])
// which is algebraically identical, carries no 1/xi cancellation, and is
// continuous through xi -> 0 at k = 0. The frequency integral is exactly
// u^2 - v^2 = 1 (the second term is odd in w).
inline double spectral_weight_closed_eps(double eps, double omega, double mu_local, double kappa) {
  const double mup = std::max(mu_local, 0.0);
  const double xi = bogoliubov_xi(eps, mup);
  const double lm = lorentzian(omega - xi, kappa);
  const double lp = lorentzian(omega + xi, kappa);
  const double dm = (omega - xi) * (omega - xi) + kappa * kappa;
  const double dp = (omega + xi) * (omega + xi) + kappa * kappa;
  return 0.5 * (lm + lp) + (eps + mup) * (2.0 * omega * kappa / constants::pi) / (dm * dp);
}

inline double spectral_weight_closed(double k, double omega, const LocalEnvironment& env,
                                     double kappa, const PhysicalParams& p) {
  if (!(kappa > 0)) throw std::invalid_argument("spectral_weight_closed: kappa must be > 0");
  const double eps = eps_k(k, p);
  return spectral_weight_closed_eps(eps, omega, env.mu_local, kappa);
}

// Local Bose occupation with the trap shift, 1/(e^{hbar(w - V)/kB T} - 1).
// The argument is floored at +-kappa/10 around its pole so the factor stays
// finite; for w - V < 0 the analytic continuation (negative occupancy) is
// returned, pairing with the negative ghost weight.
inline double bose_local(double omega, const LocalEnvironment& env, double T, double kappa) {
  if (!(T > 0)) throw std::invalid_argument("bose_local: T must be > 0");
  double x = omega - env.V_r;
  const double floor = kappa / 10.0;
  if (std::abs(x) < floor) x = (x >= 0) ? floor : -floor;
  return 1.0 / std::expm1(constants::hbar * x / (constants::k_boltzmann * T));
}

// LDA inhomogeneous linewidth: spread of the local dispersion between the
// trap centre (mu' = mu) and the cloud edge (mu' = 0).
inline double lda_line_broadening(double k, const PhysicalParams& p) {
  const double eps = eps_k(k, p);
  return bogoliubov_xi(eps, mu_thomas_fermi(p)) - eps;
}

struct QuadratureSpec {
  double rel_tol = 1e-4;
  int max_depth = 40;
};

struct PlClosedResult {
  SpectrumGrid grid;
  double worst_rel_error = 0;    // achieved relative error of the worst cell
  long cells_not_converged = 0;  // cells that exhausted max_depth
};

// Homogeneous closed spectrum: equilibrium Bose factor times the local weight
// at a single environment. Used directly for the untrapped case and as the
// reference for the homogeneous-limit identity of the radial integral.
inline SpectrumGrid pl_closed_homogeneous(std::vector<double> k_axis, std::vector<double> omega_axis,
                                          const PhysicalParams& p, double mu, double T,
                                          double kappa) {
  SpectrumGrid g;
  g.k_axis = std::move(k_axis);
  g.omega_axis = std::move(omega_axis);
  g.values.assign(g.k_axis.size() * g.omega_axis.size(), 0.0);
  const int nk = g.nk(), nw = g.nw();
  std::vector<double> eps(nk);
  for (int ik = 0; ik < nk; ++ik) eps[ik] = eps_k(g.k_axis[ik], p);
  const LocalEnvironment env0{0.0, mu, 0.0};
  parallel_for(nw, [&](long iw) {
    const double w = g.omega_axis[iw];
    const double nb = bose_local(w, env0, T, kappa);
    for (int ik = 0; ik < nk; ++ik)
      g.at(ik, static_cast<int>(iw)) = std::max(nb * spectral_weight_closed_eps(eps[ik], w, mu, kappa), 0.0);
  });
  g.validate();
  return g;
}

// Radial LDA integral over a caller-supplied potential profile:
//   P(k, w) = n_B(w) * 2 pi * integral_0^{r_cut} W(k, w; mu - V(r)) r dr / area.
// The occupation is the equilibrium Bose factor at the global chemical
// potential: inside the cloud the local mean-field level V + mu' equals mu
// everywhere, so an excitation observed at w is occupied as n_B(w)
// independent of where it sits.
template <class VFunc>
PlClosedResult pl_closed_profile(std::vector<double> k_axis, std::vector<double> omega_axis,
                                 const PhysicalParams& p, double mu, double T, double kappa,
                                 VFunc&& V_of_r, double r_cut, double area,
                                 QuadratureSpec quad = {}) {
  if (!(r_cut > 0) || !(area > 0))
    throw std::invalid_argument("pl_closed_profile: r_cut and area must be > 0");
  PlClosedResult res;
  SpectrumGrid& g = res.grid;
  g.k_axis = std::move(k_axis);
  g.omega_axis = std::move(omega_axis);
  g.values.assign(g.k_axis.size() * g.omega_axis.size(), 0.0);
  const int nk = g.nk(), nw = g.nw();
  std::vector<double> eps(nk);
  for (int ik = 0; ik < nk; ++ik) eps[ik] = eps_k(g.k_axis[ik], p);
  const LocalEnvironment env0{0.0, mu, 0.0};

  std::vector<double> worst(nw, 0.0);
  std::vector<long> bad(nw, 0);
  parallel_for(nw, [&](long iw) {
    const double w = g.omega_axis[iw];
    const double nb = bose_local(w, env0, T, kappa);
    for (int ik = 0; ik < nk; ++ik) {
      const double e = eps[ik];
      auto f = [&](double r) {
        return spectral_weight_closed_eps(e, w, mu - V_of_r(r), kappa) * r;
      };
      // first pass sets the absolute tolerance from the cell's own scale
      double i15, i7, abs15;
      detail::gl_pair(f, 0.0, r_cut, i15, i7, abs15);
      const double tol = quad.rel_tol * std::max(abs15, 1e-300);
      QuadratureResult q = integrate_adaptive(f, 0.0, r_cut, tol, quad.max_depth);
      if (!q.converged) ++bad[iw];
      if (abs15 > 0) worst[iw] = std::max(worst[iw], q.abs_error / std::max(std::abs(q.value), tol));
      g.at(ik, static_cast<int>(iw)) = std::max(nb * constants::two_pi * q.value / area, 0.0);
    }
  });
  for (int iw = 0; iw < nw; ++iw) {
    res.worst_rel_error = std::max(res.worst_rel_error, worst[iw]);
    res.cells_not_converged += bad[iw];
  }
  g.validate();
  return res;
}

// Harmonic-trap LDA spectrum. The integral runs over the condensate,
// r in [0, R_TF], normalised by the cloud area A = pi R_TF^2 (equal to the
// Thomas-Fermi expression 2 pi mu / m Omega0^2). Photons beyond the cloud are
// thermal, not condensed, and are outside this model. For g_tilde = 0 the
// cloud degenerates and the homogeneous free spectrum is returned.
inline PlClosedResult pl_closed(std::vector<double> k_axis, std::vector<double> omega_axis,
                                const PhysicalParams& p, double T, QuadratureSpec quad = {}) {
  const double mu = mu_thomas_fermi(p);
  const double kappa = p.kappa_broad;
  if (mu <= 0) {
    PlClosedResult res;
    res.grid = pl_closed_homogeneous(std::move(k_axis), std::move(omega_axis), p, 0.0, T, kappa);
    return res;
  }
  const double R = tf_radius(p);
  const double m = effective_mass(p);
  const double vcoeff = 0.5 * m * p.Omega0 * p.Omega0 / constants::hbar;
  return pl_closed_profile(
      std::move(k_axis), std::move(omega_axis), p, mu, T, kappa,
      [vcoeff](double r) { return vcoeff * r * r; }, R, constants::pi * R * R, quad);
}

}  // namespace pbec

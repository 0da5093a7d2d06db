#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "pbec/constants.hpp"
#include "pbec/diagnostics.hpp"

// Cavity / dye / condensate inputs and their unit-safe derivations.
//
// Unit convention used throughout the library: every energy-like quantity
// (chemical potential, kinetic energies, axis frequencies, rates, widths) is
// stored as an angular frequency in rad/s, i.e. E/hbar. Joule values appear
// only at explicit conversion points.

namespace pbec {

struct PhysicalParams {
  double lambda_vac = 580e-9;   // vacuum wavelength [m]
  double n_L = 1.33;            // low-intensity refractive index
  double L0 = 2e-6;             // cavity length [m]
  int q = 7;                    // longitudinal mode number
  double delta_omega = 0.0;     // cavity detuning [rad/s]
  double T = 300.0;             // temperature [K]
  double N_bec = 1e5;           // condensed photon number

  // Exactly one of these is the interaction source; the other is derived.
  std::optional<double> g_tilde = 1e-3;  // dimensionless 2D interaction parameter
  std::optional<double> chi3;            // Kerr susceptibility [(m/V)^2]

  double Omega0 = constants::two_pi * 40e9;     // trap frequency [rad/s]
  double gamma_net = constants::two_pi * 1e9;   // net gain rate [rad/s]
  double kappa_broad = constants::two_pi * 1e9; // spectral broadening [rad/s]
  double sigma_dye = 2e-22;                     // dye scattering cross-section [m^2]
  double n_dye = 1e24;                          // dye number density [m^-3]
  double kappa_cav = constants::two_pi * 1e9;   // cavity loss rate [rad/s]

  bool operator==(const PhysicalParams&) const = default;

  void validate() const {
    if (!(lambda_vac > 0)) throw std::invalid_argument("lambda_vac must be > 0");
    if (!(n_L >= 1)) throw std::invalid_argument("n_L must be >= 1");
    if (!(L0 > 0)) throw std::invalid_argument("L0 must be > 0");
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    if (!(T > 0)) throw std::invalid_argument("T must be > 0");
    if (!(N_bec >= 0)) throw std::invalid_argument("N_bec must be >= 0");
    if (g_tilde && chi3)
      throw std::invalid_argument("ambiguous interaction source: both g_tilde and chi3 set");
    if (g_tilde && *g_tilde < 0) throw std::invalid_argument("g_tilde must be >= 0");
    if (!(gamma_net == gamma_net)) throw std::invalid_argument("gamma_net must be finite");
    if (kappa_broad < 0 || kappa_cav < 0)
      throw std::invalid_argument("kappa_broad and kappa_cav must be >= 0");
    if (!(Omega0 > 0)) throw std::invalid_argument("Omega0 must be > 0");
  }
};

// Optical angular frequency 2*pi*c/lambda [rad/s].
inline double optical_omega(const PhysicalParams& p) {
  return constants::two_pi * constants::c_light / p.lambda_vac;
}

// Effective photon mass from hbar*omega = m c^2 / n_L^2.
inline double effective_mass(const PhysicalParams& p) {
  const double w = optical_omega(p);
  return constants::hbar * w * p.n_L * p.n_L / (constants::c_light * constants::c_light);
}

struct InteractionConstants {
  double g;        // 2D interaction constant [J m^2]
  double g_tilde;  // m*g/hbar^2
};

// Kerr susceptibility -> contact interaction: g = 3 hbar^2 w^2 chi3 / (n_L^4 eps0 L0).
inline InteractionConstants g_from_chi3(const PhysicalParams& p) {
  if (!p.chi3) throw std::invalid_argument("g_from_chi3: chi3 not set");
  if (p.g_tilde) throw std::invalid_argument("g_from_chi3: ambiguous interaction source");
  const double w = optical_omega(p);
  const double n4 = p.n_L * p.n_L * p.n_L * p.n_L;
  const double g = 3.0 * constants::hbar * constants::hbar * w * w * (*p.chi3) /
                   (n4 * constants::epsilon0 * p.L0);
  const double gt = effective_mass(p) * g / (constants::hbar * constants::hbar);
  return {g, gt};
}

// Inverse map used by the round-trip identity check.
inline double chi3_from_g(double g, const PhysicalParams& p) {
  const double w = optical_omega(p);
  const double n4 = p.n_L * p.n_L * p.n_L * p.n_L;
  return g * n4 * constants::epsilon0 * p.L0 / (3.0 * constants::hbar * constants::hbar * w * w);
}

// Interaction source resolution: g_tilde directly, or derived from chi3.
inline double resolved_g_tilde(const PhysicalParams& p) {
  if (p.chi3) return g_from_chi3(p).g_tilde;
  if (p.g_tilde) return *p.g_tilde;
  throw std::invalid_argument("no interaction source set (g_tilde or chi3)");
}

// g in J m^2 via the identity g = hbar^2 g_tilde / m.
inline double interaction_g(const PhysicalParams& p) {
  return constants::hbar * constants::hbar * resolved_g_tilde(p) / effective_mass(p);
}

// Thomas-Fermi chemical potential of the 2D harmonically trapped condensate,
// mu = hbar * Omega0 * sqrt(g_tilde N / pi). Returned as mu/hbar [rad/s].
inline double mu_thomas_fermi(const PhysicalParams& p) {
  const double gt = resolved_g_tilde(p);
  return p.Omega0 * std::sqrt(gt * p.N_bec / constants::pi);
}

inline double mu_thomas_fermi_joule(const PhysicalParams& p) {
  return constants::hbar * mu_thomas_fermi(p);
}

// Net gain gamma_R - kappa_cav with gamma_R = n_dye*sigma_dye*c/n_L, the
// inverse mean free time of a cavity photon against dye scattering.
inline double gamma_net_estimate(const PhysicalParams& p) {
  const double gamma_R = p.n_dye * p.sigma_dye * constants::c_light / p.n_L;
  const double net = gamma_R - p.kappa_cav;
  if (net <= 0) warn("gamma_net_estimate: no net gain (gamma_R <= kappa_cav)");
  return net;
}

// Saturation coefficient Gamma such that gain vanishes at the steady-state
// peak density: Gamma = gamma_net / |psi(0,0)|^2.  [rad m^2 / s]
inline double saturation_coefficient(double gamma_net, double peak_density) {
  if (!(peak_density > 0)) throw std::invalid_argument("saturation_coefficient: peak_density must be > 0");
  return gamma_net / peak_density;
}

struct DerivedQuantities {
  double omega;        // optical angular frequency [rad/s]
  double k_L;          // wavenumber in the medium [1/m]
  double k0;           // typical longitudinal wavenumber q*pi*n_L/L0 [1/m]
  double mass;         // effective photon mass [kg]
  double mu;           // TF chemical potential [rad/s]
  double mu_joule;     // same in J
  double g;            // interaction constant [J m^2]
  double g_tilde;      // dimensionless
  double sound_speed;  // sqrt(mu_J/m) [m/s]
};

inline DerivedQuantities derive(const PhysicalParams& p) {
  p.validate();
  DerivedQuantities d{};
  d.omega = optical_omega(p);
  d.k_L = d.omega * p.n_L / constants::c_light;
  d.k0 = p.q * constants::pi * p.n_L / p.L0;
  d.mass = effective_mass(p);
  d.g_tilde = resolved_g_tilde(p);
  d.g = constants::hbar * constants::hbar * d.g_tilde / d.mass;
  d.mu = mu_thomas_fermi(p);
  d.mu_joule = constants::hbar * d.mu;
  d.sound_speed = std::sqrt(d.mu_joule / d.mass);
  return d;
}

// Free-particle kinetic energy hbar k^2 / 2m [rad/s].
inline double eps_k(double k, const PhysicalParams& p) {
  return constants::hbar * k * k / (2.0 * effective_mass(p));
}

// Wavenumber whose kinetic energy equals eps [rad/s].
inline double k_of_eps(double eps, const PhysicalParams& p) {
  return std::sqrt(2.0 * effective_mass(p) * eps / constants::hbar);
}

// Bogoliubov dispersion sqrt(eps (eps + 2 mu)) [rad/s]; negative mu is
// treated as zero (free particle).
inline double bogoliubov_xi(double eps, double mu) {
  return std::sqrt(eps * (eps + 2.0 * std::max(mu, 0.0)));
}

}  // namespace pbec

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pbec/grid.hpp"

// Split-step spectral propagation of the driven-dissipative condensate
// equation on a periodic grid, in rad/s units:
//
//   d(psi)/dt = -i [ V + g|psi|^2 ] psi + i (hbar/2m) Lap psi
//               + ( gamma_net - Gamma |psi|^2 ) psi
//
// Strang splitting: half step of the local (potential, interaction, gain)
// factors in position space, full kinetic step in Fourier space, half local
// step again. O(dt^2) accurate; exactly norm-preserving in the conservative
// case up to roundoff.

namespace pbec {

enum class EvolutionMode { real_time, imaginary_time };

struct GainSpec {
  bool enabled = false;
  double gamma_net = 0.0;  // rad/s
  double Gamma = 0.0;      // rad m^2 / s
};

struct EvolutionSpec {
  double dt = 0.0;  // s
  long steps = 0;
  EvolutionMode mode = EvolutionMode::real_time;
  GainSpec gain;
};

// Kinetic energy at the grid's Nyquist corner [rad/s]; the stiffest scale the
// grid can represent.
inline double eps_max_grid(int n, double dx, const PhysicalParams& p) {
  const double knyq = constants::pi / dx;
  return constants::hbar * (2.0 * knyq * knyq) / (2.0 * effective_mass(p));
}

// Default time step 0.1 / max(eps_max, V_max, mu).
inline double auto_dt(const PotentialMap& V, const PhysicalParams& p) {
  const double scale = std::max({eps_max_grid(V.n, V.dx, p), V.max_value(), mu_thomas_fermi(p)});
  return 0.1 / scale;
}

class Propagator {
 public:
  Propagator(PotentialMap V, PhysicalParams p)
      : p_(std::move(p)), V_(std::move(V)), plan_(V_.n) {
    p_.validate();
    const int n = V_.n;
    eps_.resize(static_cast<size_t>(n) * n);
    const double m = effective_mass(p_);
    for (int iy = 0; iy < n; ++iy) {
      const double ky = fft_wavenumber(iy, n, V_.dx);
      for (int ix = 0; ix < n; ++ix) {
        const double kx = fft_wavenumber(ix, n, V_.dx);
        eps_[static_cast<size_t>(iy) * n + ix] = constants::hbar * (kx * kx + ky * ky) / (2.0 * m);
      }
    }
    g_over_hbar_ = interaction_g(p_) / constants::hbar;  // rad s^-1 m^2
  }

  const PhysicalParams& params() const { return p_; }
  const PotentialMap& potential() const { return V_; }
  double g_over_hbar() const { return g_over_hbar_; }
  double eps_max() const { return eps_max_grid(V_.n, V_.dx, p_); }

  // One Strang step. Real-time mode enforces the accuracy bound
  // dt * max(V, eps_max) < 0.5; the imaginary-time kinetic factor is a
  // contraction for any dt, so only the local factors are bounded there.
  void step(ComplexField2D& f, double dt, EvolutionMode mode, const GainSpec& gain) const {
    check_grid(f);
    if (!(dt > 0)) throw std::invalid_argument("step: dt must be > 0");
    const double before = f.max_density();
    const double local_scale = V_.max_value() + g_over_hbar_ * before;
    if (mode == EvolutionMode::real_time) {
      if (dt * std::max(local_scale, eps_max()) >= 0.5)
        throw std::invalid_argument("step: dt violates the stability bound dt*max(V, eps_max) < 0.5");
    } else if (dt * local_scale >= 0.5) {
      throw std::invalid_argument("step: dt too large for the local factors");
    }
    half_local(f, dt, mode, gain);
    kinetic(f, dt, mode);
    half_local(f, dt, mode, gain);
    const double after = f.max_density();
    if (before > 0 && after > 1e3 * before)
      throw std::runtime_error("step: divergence detected (peak density grew by >1e3 in one step)");
  }

  // Energy functional per particle [rad/s]:
  //   E/N = ( sum eps|psi_k|^2 dx^2/n^2 + sum (V + g/2 |psi|^2)|psi|^2 dx^2 ) / N
  double energy_per_particle(const ComplexField2D& f) const {
    check_grid(f);
    const double N = f.particle_number();
    if (!(N > 0)) throw std::invalid_argument("energy_per_particle: empty field");
    return (kinetic_energy(f) + potential_energy(f) + interaction_energy(f)) / N;
  }

  // Nonlinear-eigenvalue chemical potential <T + V + g|psi|^2> / N [rad/s].
  double chemical_potential_eigenvalue(const ComplexField2D& f) const {
    check_grid(f);
    const double N = f.particle_number();
    if (!(N > 0)) throw std::invalid_argument("chemical_potential_eigenvalue: empty field");
    return (kinetic_energy(f) + potential_energy(f) + 2.0 * interaction_energy(f)) / N;
  }

  // Chemical potential from the peak density, mu = g |psi|^2_max — the
  // homogeneous relation evaluated at the trap centre. This is the quantity
  // the spectrum pipeline consumes.
  double chemical_potential_central(const ComplexField2D& f) const {
    return g_over_hbar_ * f.max_density();
  }

  double kinetic_energy(const ComplexField2D& f) const {  // [rad/s * particles]
    std::vector<cplx> buf(f.psi);
    fft2(buf.data(), f.n, plan_, false);
    const double scale = f.dx * f.dx / (static_cast<double>(f.n) * f.n);
    double total = 0;
    for (int iy = 0; iy < f.n; ++iy) {
      double row = 0;
      const size_t base = static_cast<size_t>(iy) * f.n;
      for (int ix = 0; ix < f.n; ++ix) row += eps_[base + ix] * std::norm(buf[base + ix]);
      total += row;
    }
    return total * scale;
  }

  double potential_energy(const ComplexField2D& f) const {
    double total = 0;
    for (int iy = 0; iy < f.n; ++iy) {
      double row = 0;
      const size_t base = static_cast<size_t>(iy) * f.n;
      for (int ix = 0; ix < f.n; ++ix) row += V_.v[base + ix] * std::norm(f.psi[base + ix]);
      total += row;
    }
    return total * f.dx * f.dx;
  }

  double interaction_energy(const ComplexField2D& f) const {
    double total = 0;
    for (int iy = 0; iy < f.n; ++iy) {
      double row = 0;
      const size_t base = static_cast<size_t>(iy) * f.n;
      for (int ix = 0; ix < f.n; ++ix) {
        const double d = std::norm(f.psi[base + ix]);
        row += d * d;
      }
      total += row;
    }
    return 0.5 * g_over_hbar_ * total * f.dx * f.dx;
  }

 private:
  void check_grid(const ComplexField2D& f) const {
    if (f.n != V_.n || f.extent != V_.extent)
      throw std::invalid_argument("Propagator: field grid does not match the potential grid");
  }

  void half_local(ComplexField2D& f, double dt, EvolutionMode mode, const GainSpec& gain) const {
    const int n = f.n;
    const double h = 0.5 * dt;
    const bool imag = (mode == EvolutionMode::imaginary_time);
    parallel_for(n, [&](long iy) {
      cplx* row = f.psi.data() + static_cast<size_t>(iy) * n;
      const double* vrow = V_.v.data() + static_cast<size_t>(iy) * n;
      for (int ix = 0; ix < n; ++ix) {
        const double dens = std::norm(row[ix]);
        const double local = vrow[ix] + g_over_hbar_ * dens;
        if (imag) {
          row[ix] *= std::exp(-h * local);
        } else {
          double amp = 1.0;
          if (gain.enabled) amp = std::exp(h * (gain.gamma_net - gain.Gamma * dens));
          const double phase = -h * local;
          row[ix] *= amp * cplx(std::cos(phase), std::sin(phase));
        }
      }
    });
  }

  void kinetic(ComplexField2D& f, double dt, EvolutionMode mode) const {
    refresh_kinetic_table(dt, mode);
    fft2(f.psi.data(), f.n, plan_, false);
    const size_t nn = f.psi.size();
    const int n = f.n;
    parallel_for(n, [&](long iy) {
      const size_t base = static_cast<size_t>(iy) * n;
      for (int ix = 0; ix < n; ++ix) f.psi[base + ix] *= kprop_[base + ix];
    });
    (void)nn;
    fft2(f.psi.data(), f.n, plan_, true);
  }

  void refresh_kinetic_table(double dt, EvolutionMode mode) const {
    if (dt == cached_dt_ && mode == cached_mode_ && !kprop_.empty()) return;
    kprop_.resize(eps_.size());
    if (mode == EvolutionMode::imaginary_time) {
      for (size_t i = 0; i < eps_.size(); ++i) kprop_[i] = std::exp(-eps_[i] * dt);
    } else {
      for (size_t i = 0; i < eps_.size(); ++i) {
        const double ph = -eps_[i] * dt;
        kprop_[i] = cplx(std::cos(ph), std::sin(ph));
      }
    }
    cached_dt_ = dt;
    cached_mode_ = mode;
  }

  PhysicalParams p_;
  PotentialMap V_;
  Fft plan_;
  std::vector<double> eps_;
  double g_over_hbar_ = 0;
  mutable std::vector<cplx> kprop_;
  mutable double cached_dt_ = -1.0;
  mutable EvolutionMode cached_mode_ = EvolutionMode::real_time;
};

// Single-step convenience wrapper.
inline ComplexField2D step(const ComplexField2D& f, const PotentialMap& V, const PhysicalParams& p,
                           const EvolutionSpec& spec) {
  Propagator prop(V, p);
  ComplexField2D out = f;
  prop.step(out, spec.dt, spec.mode, spec.gain);
  return out;
}

// Runs spec.steps steps.
inline ComplexField2D evolve(const ComplexField2D& f, const PotentialMap& V, const PhysicalParams& p,
                             const EvolutionSpec& spec) {
  Propagator prop(V, p);
  ComplexField2D out = f;
  for (long s = 0; s < spec.steps; ++s) prop.step(out, spec.dt, spec.mode, spec.gain);
  return out;
}

// Real-time evolution with gain and saturation.
inline ComplexField2D evolve_open(const ComplexField2D& f, const PotentialMap& V,
                                  const PhysicalParams& p, EvolutionSpec spec) {
  if (!spec.gain.enabled) throw std::invalid_argument("evolve_open: gain parameters not set");
  if (!(spec.gain.Gamma > 0)) throw std::invalid_argument("evolve_open: Gamma must be > 0");
  spec.mode = EvolutionMode::real_time;
  return evolve(f, V, p, spec);
}

inline void renormalize(ComplexField2D& f, double target_N) {
  const double N = f.particle_number();
  if (!(N > 0)) throw std::runtime_error("renormalize: field vanished");
  const double s = std::sqrt(target_N / N);
  for (cplx& v : f.psi) v *= s;
}

struct RelaxOptions {
  double rel_tol = 1e-10;       // stop when |dE| per step < rel_tol * |E|
  long max_steps_per_stage = 8000;
  // dt schedule in units of 1/max(mu, Omega0). The Strang fixed point carries
  // an O(dt^2) bias, so the step is tightened once the energy stalls.
  std::vector<double> dt_factors = {0.2, 0.05, 0.01, 0.003};
};

struct RelaxResult {
  ComplexField2D field;
  double energy = 0;            // E/N [rad/s]
  double mu_central = 0;        // g * peak density [rad/s]
  double mu_eigenvalue = 0;     // <T + V + g n> / N [rad/s]
  long steps = 0;
  bool converged = false;
};

// Imaginary-time relaxation with renormalisation to target_N each step.
inline RelaxResult relax_to_steady_state(const PotentialMap& V, const PhysicalParams& p,
                                         double target_N, RelaxOptions opt = {}) {
  if (!(target_N > 0)) throw std::invalid_argument("relax_to_steady_state: target_N must be > 0");
  Propagator prop(V, p);
  const int n = V.n;
  ComplexField2D f(n, V.extent);

  // Smooth positive seed on the trap scale.
  const double width = std::max(tf_radius(p) / 2.0, oscillator_length(p));
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = f.coord(ix), y = f.coord(iy);
      f.at(ix, iy) = std::exp(-(x * x + y * y) / (2.0 * width * width));
    }
  renormalize(f, target_N);

  const double scale = std::max(mu_thomas_fermi(p), p.Omega0);
  RelaxResult res;
  GainSpec no_gain;
  bool last_stage_converged = false;
  for (double fac : opt.dt_factors) {
    const double dtau = fac / scale;
    double e_prev = prop.energy_per_particle(f);
    last_stage_converged = false;
    for (long it = 0; it < opt.max_steps_per_stage; ++it) {
      prop.step(f, dtau, EvolutionMode::imaginary_time, no_gain);
      renormalize(f, target_N);
      ++res.steps;
      const double e = prop.energy_per_particle(f);
      if (std::abs(e - e_prev) < opt.rel_tol * std::abs(e)) {
        last_stage_converged = true;
        e_prev = e;
        break;
      }
      e_prev = e;
    }
    res.energy = e_prev;
  }
  if (!last_stage_converged)
    throw std::runtime_error("relax_to_steady_state: not converged within max_steps_per_stage");
  res.converged = true;
  res.mu_central = prop.chemical_potential_central(f);
  res.mu_eigenvalue = prop.chemical_potential_eigenvalue(f);
  res.field = std::move(f);
  return res;
}

// Wavefunction <-> electric-field envelope, psi = E0 sqrt(n_L^2 eps0 L0 / 2 hbar omega).
inline double psi_per_field(const PhysicalParams& p) {
  return std::sqrt(p.n_L * p.n_L * constants::epsilon0 * p.L0 / (2.0 * constants::hbar * optical_omega(p)));
}

inline std::vector<cplx> psi_to_field(const ComplexField2D& f, const PhysicalParams& p) {
  const double s = 1.0 / psi_per_field(p);
  std::vector<cplx> e0(f.psi.size());
  for (size_t i = 0; i < e0.size(); ++i) e0[i] = f.psi[i] * s;
  return e0;
}

inline ComplexField2D field_to_psi(const std::vector<cplx>& e0, int n, double extent,
                                   const PhysicalParams& p) {
  if (e0.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("field_to_psi: grid size mismatch");
  ComplexField2D f(n, extent);
  const double s = psi_per_field(p);
  for (size_t i = 0; i < e0.size(); ++i) f.psi[i] = e0[i] * s;
  return f;
}

}  // namespace pbec

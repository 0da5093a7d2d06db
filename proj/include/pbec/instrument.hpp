#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbec/params.hpp"
#include "pbec/spectrum_grid.hpp"

// Forward model of the angle-resolved spectrometer: resolution budgets,
// Gaussian instrument convolution, camera rebinning and quantisation, and the
// minimum-detectable-interaction estimators.

namespace pbec {

struct InstrumentConfig {
  double f_obj = 0.2;                 // objective focal length [m]
  double L_prop = 0.3;                // objective-to-camera propagation [m]
  double d_slit = 180e-6;             // slit width [m]
  double M_y = 100.0;                 // cylindrical telescope magnification
  double d_grating = 1e-3 / 900.0;    // grating period [m]
  double f_im = 0.2;                  // imaging lens focal length [m]
  double px_momentum = 180e-6;        // camera pixel pitch along k [m]
  double px_energy = 1.5e-6;          // camera pixel pitch along energy [m]
  int bit_depth = 16;                 // camera dynamic range {8, 12, 16}
  double full_well_fraction = 1.0;    // saturation level relative to grid peak, (0, 1]

  bool operator==(const InstrumentConfig&) const = default;

  void validate() const {
    if (!(f_obj > 0) || !(L_prop > 0) || !(d_slit > 0) || !(d_grating > 0) || !(f_im > 0) ||
        !(px_momentum > 0) || !(px_energy > 0))
      throw std::invalid_argument("InstrumentConfig: all lengths must be > 0");
    if (!(M_y >= 1)) throw std::invalid_argument("InstrumentConfig: M_y must be >= 1");
    if (bit_depth != 8 && bit_depth != 12 && bit_depth != 16)
      throw std::invalid_argument("InstrumentConfig: bit_depth must be 8, 12 or 16");
    if (!(full_well_fraction > 0) || !(full_well_fraction <= 1))
      throw std::invalid_argument("InstrumentConfig: full_well_fraction must be in (0, 1]");
  }
};

struct ResolutionBudget {
  double delta_k = 0;        // momentum resolution [1/m]
  double px_opt = 0;         // optimal momentum pixel [m]
  double delta_lambda = 0;   // wavelength resolution [m]
  double delta_eps = 0;      // energy resolution [rad/s]
  double gmin_momentum = 0;  // minimum resolvable g_tilde, momentum-limited
  double gmin_energy = 0;    // minimum resolvable g_tilde, energy-limited
};

// Small-angle screen mapping x = n_L f_obj k / k0 with k0 = q pi n_L / L0.
// Warns once the quadratic angle correction exceeds 1%.
inline double k_to_screen(double k, const InstrumentConfig& cfg, const PhysicalParams& p) {
  const double k0 = p.q * constants::pi * p.n_L / p.L0;
  const double theta_ext = p.n_L * k / k0;
  if (theta_ext * theta_ext / 2.0 > 0.01)
    warn("k_to_screen: small-angle approximation error exceeds 1%");
  return cfg.f_obj * theta_ext;
}

// Diffraction limit balanced against pixelisation:
//   delta_k = (2 / n_L f_obj) sqrt(pi L_prop / lambda),  px_opt = sqrt(L_prop lambda / pi).
inline std::pair<double, double> momentum_resolution(const InstrumentConfig& cfg,
                                                     const PhysicalParams& p) {
  const double delta_k = (2.0 / (p.n_L * cfg.f_obj)) * std::sqrt(constants::pi * cfg.L_prop / p.lambda_vac);
  const double px_opt = std::sqrt(cfg.L_prop * p.lambda_vac / constants::pi);
  return {delta_k, px_opt};
}

// Grating resolving power = number of lines covered by the beam D = d_slit M_y:
//   delta_lambda = lambda d_grating / D,  delta_eps = 2 pi c delta_lambda / lambda^2.
inline std::pair<double, double> energy_resolution(const InstrumentConfig& cfg,
                                                   const PhysicalParams& p) {
  const double D = cfg.d_slit * cfg.M_y;
  if (!(D > cfg.d_grating))
    throw std::invalid_argument("energy_resolution: beam covers less than one grating line (D <= d_grating)");
  const double dlam = p.lambda_vac * cfg.d_grating / D;
  const double deps = constants::two_pi * constants::c_light * dlam / (p.lambda_vac * p.lambda_vac);
  return {dlam, deps};
}

// First-order diffraction angle of the grating.
inline double grating_angle(const InstrumentConfig& cfg, const PhysicalParams& p) {
  const double s = p.lambda_vac / cfg.d_grating;
  if (!(s < 1)) throw std::invalid_argument("grating_angle: lambda exceeds the grating period");
  return std::asin(s);
}

// Camera pixel size that just matches the grating resolution on the energy
// axis, f_im * delta_lambda / (d_grating cos theta).
inline double energy_pixel_requirement(const InstrumentConfig& cfg, const PhysicalParams& p) {
  const double dlam = energy_resolution(cfg, p).first;
  return cfg.f_im * dlam / (cfg.d_grating * std::cos(grating_angle(cfg, p)));
}

// Energy pitch of one camera pixel [rad/s]: invert the grating dispersion
// dy/dlambda = f_im / (d cos theta).
inline double energy_pixel_pitch(const InstrumentConfig& cfg, const PhysicalParams& p) {
  const double dlam_px = cfg.px_energy * cfg.d_grating * std::cos(grating_angle(cfg, p)) / cfg.f_im;
  return constants::two_pi * constants::c_light * dlam_px / (p.lambda_vac * p.lambda_vac);
}

// Momentum pitch of one camera pixel [1/m]: invert the screen mapping.
inline double momentum_pixel_pitch(const InstrumentConfig& cfg, const PhysicalParams& p) {
  const double k0 = p.q * constants::pi * p.n_L / p.L0;
  return cfg.px_momentum * k0 / (p.n_L * cfg.f_obj);
}

struct GminEstimates {
  double gmin_momentum = 0;
  double gmin_energy = 0;
  bool momentum_limited = false;  // true when the momentum limit dominates
};

// Minimum resolvable interaction from an explicit resolution budget:
//   g_momentum = (hbar^2 dk^2 / 4m)^2 pi / (N (hbar Omega0)^2)
//   g_energy   = (hbar de)^2 pi / (N (2 hbar Omega0)^2)
inline GminEstimates gmin_from_budget(double delta_k, double delta_eps, const PhysicalParams& p) {
  if (!(p.N_bec > 0)) throw std::invalid_argument("gmin: N_bec must be > 0");
  const double m = effective_mass(p);
  const double ek = constants::hbar * constants::hbar * delta_k * delta_k / (4.0 * m);  // J
  const double hO = constants::hbar * p.Omega0;
  GminEstimates r;
  r.gmin_momentum = ek * ek * constants::pi / (p.N_bec * hO * hO);
  const double he = constants::hbar * delta_eps;
  r.gmin_energy = he * he * constants::pi / (p.N_bec * 4.0 * hO * hO);
  r.momentum_limited = r.gmin_momentum > r.gmin_energy;
  return r;
}

inline GminEstimates gmin_estimates(const InstrumentConfig& cfg, const PhysicalParams& p) {
  cfg.validate();
  return gmin_from_budget(momentum_resolution(cfg, p).first, energy_resolution(cfg, p).second, p);
}

inline ResolutionBudget resolution_budget(const InstrumentConfig& cfg, const PhysicalParams& p) {
  cfg.validate();
  ResolutionBudget b;
  std::tie(b.delta_k, b.px_opt) = momentum_resolution(cfg, p);
  std::tie(b.delta_lambda, b.delta_eps) = energy_resolution(cfg, p);
  const GminEstimates g = gmin_from_budget(b.delta_k, b.delta_eps, p);
  b.gmin_momentum = g.gmin_momentum;
  b.gmin_energy = g.gmin_energy;
  return b;
}

namespace detail {

inline void require_uniform(const std::vector<double>& ax, const char* name) {
  const double d0 = ax[1] - ax[0];
  for (size_t i = 2; i < ax.size(); ++i)
    if (std::abs((ax[i] - ax[i - 1]) - d0) > 1e-9 * std::abs(d0))
      throw std::invalid_argument(std::string("instrument: ") + name + " axis must be uniform");
}

// Separable 1D Gaussian convolution along the omega (axis=0) or k (axis=1)
// direction, reflecting at the boundaries. Kernel truncated at 5 sigma and
// renormalised to unit sum.
inline void gaussian_convolve_axis(SpectrumGrid& g, double sigma, int axis) {
  const int nk = g.nk(), nw = g.nw();
  const std::vector<double>& ax = (axis == 0) ? g.omega_axis : g.k_axis;
  const double d = ax[1] - ax[0];
  const int half = static_cast<int>(std::ceil(5.0 * sigma / d));
  if (half < 1) return;
  std::vector<double> ker(2 * half + 1);
  double sum = 0;
  for (int i = -half; i <= half; ++i) {
    const double x = i * d / sigma;
    ker[i + half] = std::exp(-0.5 * x * x);
    sum += ker[i + half];
  }
  for (double& v : ker) v /= sum;

  const int len = (axis == 0) ? nw : nk;
  auto reflect = [len](int i) {
    while (i < 0 || i >= len) {
      if (i < 0) i = -i - 1;
      if (i >= len) i = 2 * len - 1 - i;
    }
    return i;
  };
  std::vector<double> out(g.values.size());
  if (axis == 0) {
    parallel_for(nk, [&](long ik) {
      for (int iw = 0; iw < nw; ++iw) {
        double acc = 0;
        for (int j = -half; j <= half; ++j) acc += ker[j + half] * g.at(static_cast<int>(ik), reflect(iw - j));
        out[static_cast<size_t>(iw) * nk + ik] = acc;
      }
    });
  } else {
    parallel_for(nw, [&](long iw) {
      for (int ik = 0; ik < nk; ++ik) {
        double acc = 0;
        for (int j = -half; j <= half; ++j) acc += ker[j + half] * g.at(reflect(ik - j), static_cast<int>(iw));
        out[static_cast<size_t>(iw) * nk + ik] = acc;
      }
    });
  }
  g.values = std::move(out);
}

// Area-weighted rebin of cell-centred samples onto a coarser uniform pitch.
// Pixel edges are anchored at the low edge of the input span; a partial strip
// at the high edge is dropped.
inline void rebin_axis(SpectrumGrid& g, double pitch, int axis) {
  const std::vector<double>& ax = (axis == 0) ? g.omega_axis : g.k_axis;
  const double d = ax[1] - ax[0];
  if (pitch <= d) return;  // camera already finer than the grid: keep cells
  const double lo = ax.front() - 0.5 * d;
  const double hi = ax.back() + 0.5 * d;
  const int npix = static_cast<int>(std::floor((hi - lo) / pitch));
  if (npix < 1) throw std::invalid_argument("camera_stage: pixel pitch exceeds the grid span");
  const int len = static_cast<int>(ax.size());
  // overlap weights per pixel
  std::vector<double> centers(npix);
  std::vector<std::vector<std::pair<int, double>>> weights(npix);
  for (int ipx = 0; ipx < npix; ++ipx) {
    const double a = lo + ipx * pitch, b = a + pitch;
    centers[ipx] = 0.5 * (a + b);
    double wsum = 0;
    const int jlo = std::max(0, static_cast<int>(std::floor((a - lo) / d)));
    const int jhi = std::min(len - 1, static_cast<int>(std::floor((b - lo) / d)));
    for (int j = jlo; j <= jhi; ++j) {
      const double ca = lo + j * d, cb = ca + d;
      const double ov = std::min(b, cb) - std::max(a, ca);
      if (ov > 0) {
        weights[ipx].push_back({j, ov});
        wsum += ov;
      }
    }
    for (auto& [j, wv] : weights[ipx]) wv /= wsum;
  }
  const int nk = g.nk(), nw = g.nw();
  SpectrumGrid out;
  if (axis == 0) {
    out.k_axis = g.k_axis;
    out.omega_axis = centers;
    out.values.assign(static_cast<size_t>(npix) * nk, 0.0);
    for (int ipx = 0; ipx < npix; ++ipx)
      for (const auto& [j, wv] : weights[ipx])
        for (int ik = 0; ik < nk; ++ik) out.values[static_cast<size_t>(ipx) * nk + ik] += wv * g.at(ik, j);
  } else {
    out.k_axis = centers;
    out.omega_axis = g.omega_axis;
    out.values.assign(static_cast<size_t>(npix) * nw, 0.0);
    for (int iw = 0; iw < nw; ++iw)
      for (int ipx = 0; ipx < npix; ++ipx)
        for (const auto& [j, wv] : weights[ipx])
          out.values[static_cast<size_t>(iw) * npix + ipx] += wv * g.at(j, iw);
  }
  g = std::move(out);
}

}  // namespace detail

// Gaussian instrument blur with standard deviations delta_k/2 and delta_eps/2
// (FWHM approximately equal to the stated resolutions). Requires the input to
// resolve the blur: grid spacing <= 1/3 of each resolution width.
inline SpectrumGrid convolve_instrument(const SpectrumGrid& grid, const InstrumentConfig& cfg,
                                        const PhysicalParams& p) {
  cfg.validate();
  grid.validate(false);
  detail::require_uniform(grid.k_axis, "k");
  detail::require_uniform(grid.omega_axis, "omega");
  const double dk = grid.k_axis[1] - grid.k_axis[0];
  const double dw = grid.omega_axis[1] - grid.omega_axis[0];
  const auto [delta_k, px_opt] = momentum_resolution(cfg, p);
  const auto [dlam, delta_eps] = energy_resolution(cfg, p);
  (void)px_opt;
  (void)dlam;
  if (dk > delta_k / 3.0 || dw > delta_eps / 3.0)
    throw std::invalid_argument("convolve_instrument: input grid does not resolve the instrument widths");
  SpectrumGrid out = grid;
  detail::gaussian_convolve_axis(out, delta_k / 2.0, 1);
  detail::gaussian_convolve_axis(out, delta_eps / 2.0, 0);
  return out;
}

// Camera model: area-weighted rebin to the physical pixel pitches, then
// digitisation. full_well_fraction sets the saturation level relative to the
// grid peak: code = round(v * (2^bits - 1) / (fwf * peak)), clipped at full
// well. Values below one LSB quantise to zero. Output values are the integer
// codes (stored as doubles) on pixel-centre axes.
inline SpectrumGrid camera_stage(const SpectrumGrid& grid, const InstrumentConfig& cfg,
                                 const PhysicalParams& p) {
  cfg.validate();
  grid.validate(false);
  detail::require_uniform(grid.k_axis, "k");
  detail::require_uniform(grid.omega_axis, "omega");
  SpectrumGrid out = grid;
  detail::rebin_axis(out, momentum_pixel_pitch(cfg, p), 1);
  detail::rebin_axis(out, energy_pixel_pitch(cfg, p), 0);
  const double full = static_cast<double>((1 << cfg.bit_depth) - 1);
  const double peak = out.max_value();
  if (peak <= 0) {
    for (double& v : out.values) v = 0.0;
    return out;
  }
  const double sat = cfg.full_well_fraction * peak;
  for (double& v : out.values) v = std::min(full, std::round(v * full / sat));
  return out;
}

}  // namespace pbec

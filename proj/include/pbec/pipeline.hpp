#pragma once

#include <string>
#include <vector>

#include "pbec/cgpe.hpp"
#include "pbec/config.hpp"
#include "pbec/instrument.hpp"
#include "pbec/io.hpp"
#include "pbec/lda_spectrum.hpp"
#include "pbec/open_spectrum.hpp"

// Subcommand orchestration: solve -> spectrum -> instrument, plus the
// resolution report and ridge extraction. Every output file carries the
// canonical-config hash, the library version and the value units; identical
// configs produce byte-identical files.

namespace pbec {

inline constexpr const char* kVersion = "0.1.0";

inline std::vector<std::string> provenance_lines(const RunConfig& cfg, const std::string& units) {
  return {"config " + config_hash(cfg), std::string("version pbec ") + kVersion, "units " + units};
}

// Ideal photoluminescence grid for the configured model, not normalised.
inline SpectrumGrid compute_spectrum(const RunConfig& cfg) {
  const SpectrumAxes ax = spectrum_axes(cfg);
  const double mu = mu_thomas_fermi(cfg.phys);
  if (cfg.model == SpectrumModel::open)
    return pl_open(ax.k, ax.omega, cfg.phys, mu, cfg.phys.gamma_net, cfg.phys.T);
  PlClosedResult res = pl_closed(ax.k, ax.omega, cfg.phys, cfg.phys.T);
  if (res.cells_not_converged > 0)
    warn("pl_closed: " + std::to_string(res.cells_not_converged) +
         " cells did not reach the radial quadrature tolerance (achieved " +
         format_g17(res.worst_rel_error) + ")");
  return std::move(res.grid);
}

// Ground state via imaginary-time relaxation; writes the density as a grid
// CSV with spatial axes. The extracted chemical potentials are recorded in
// the provenance header.
inline std::vector<std::string> run_solve(const RunConfig& cfg, const std::string& out_path) {
  const double extent = solver_extent(cfg);
  const PotentialMap V = harmonic_potential(cfg.grid_n, extent, cfg.phys);
  const RelaxResult r = relax_to_steady_state(V, cfg.phys, cfg.phys.N_bec);

  SpectrumGrid density;
  density.k_axis.resize(cfg.grid_n);
  density.omega_axis.resize(cfg.grid_n);
  for (int i = 0; i < cfg.grid_n; ++i) density.k_axis[i] = density.omega_axis[i] = r.field.coord(i);
  density.values.resize(r.field.psi.size());
  for (size_t i = 0; i < density.values.size(); ++i) density.values[i] = std::norm(r.field.psi[i]);

  GridAxisNames names{"x_axis", "m", "y_axis", "m"};
  std::vector<std::string> prov = provenance_lines(cfg, "density 1/m^2");
  prov.push_back("mu_central rad/s: " + format_g17(r.mu_central));
  prov.push_back("mu_eigenvalue rad/s: " + format_g17(r.mu_eigenvalue));
  prov.push_back("relax_steps: " + std::to_string(r.steps));
  write_grid_csv(out_path, density, names, prov);
  return {out_path};
}

inline std::vector<std::string> run_spectrum(const RunConfig& cfg, const std::string& out_path) {
  SpectrumGrid g = compute_spectrum(cfg);
  if (cfg.normalization == Normalization::unit_max) g.normalize_unit_max();
  write_grid_csv(out_path, g, GridAxisNames{},
                 provenance_lines(cfg, cfg.normalization == Normalization::unit_max
                                           ? "intensity arb (unit max)"
                                           : "intensity arb"));
  return {out_path};
}

inline std::vector<std::string> run_instrument(const RunConfig& cfg, const std::string& out_path,
                                               const std::string& pgm_path) {
  SpectrumGrid ideal = compute_spectrum(cfg);
  SpectrumGrid blurred = convolve_instrument(ideal, cfg.instr, cfg.phys);
  SpectrumGrid camera = camera_stage(blurred, cfg.instr, cfg.phys);
  std::vector<std::string> prov = provenance_lines(cfg, "camera counts");
  prov.push_back("bit_depth: " + std::to_string(cfg.instr.bit_depth));
  write_grid_csv(out_path, camera, GridAxisNames{}, prov);
  std::vector<std::string> files{out_path};
  if (!pgm_path.empty()) {
    write_pgm(pgm_path, camera, cfg.instr.bit_depth);
    files.push_back(pgm_path);
  }
  return files;
}

inline std::string resolve_report_text(const RunConfig& cfg) {
  const ResolutionBudget b = resolution_budget(cfg.instr, cfg.phys);
  // The quoted literature reference points mix an n_L = 1 optics budget with
  // the in-medium photon mass; reproduce that combination alongside the
  // config-consistent evaluation so both are on record.
  PhysicalParams vac = cfg.phys;
  vac.n_L = 1.0;
  const double dk_vac = momentum_resolution(cfg.instr, vac).first;
  const GminEstimates mixed = gmin_from_budget(dk_vac, b.delta_eps, cfg.phys);

  std::string s;
  s += "pbec resolution report (version " + std::string(kVersion) + ")\n";
  s += "config " + config_hash(cfg) + "\n\n";
  s += "momentum resolution delta_k      = " + format_g17(b.delta_k) + " 1/m\n";
  s += "optimal momentum pixel px_opt    = " + format_g17(b.px_opt) + " m\n";
  s += "wavelength resolution delta_lam  = " + format_g17(b.delta_lambda) + " m\n";
  s += "energy resolution delta_eps      = " + format_g17(b.delta_eps) + " rad/s";
  s += "  (= 2pi x " + format_g17(b.delta_eps / constants::two_pi / 1e9) + " GHz)\n";
  s += "energy pixel to match delta_lam  = " + format_g17(energy_pixel_requirement(cfg.instr, cfg.phys)) + " m\n\n";
  s += "minimum resolvable g_tilde, formula evaluation at this config:\n";
  s += "  momentum-limited               = " + format_g17(b.gmin_momentum) + "\n";
  s += "  energy-limited                 = " + format_g17(b.gmin_energy) + "\n";
  s += "mixed evaluation (n_L = 1 optics budget, in-medium mass):\n";
  s += "  momentum-limited               = " + format_g17(mixed.gmin_momentum) + "\n";
  s += "literature reference points      : 2e-10 (momentum-limited), 2e-5 (energy-limited)\n";
  s += "note: the direct formula evaluations differ from the reference points by factors\n";
  s += "of ~3-5. The momentum reference corresponds to the mixed evaluation above (an\n";
  s += "n_L = 1 resolution budget combined with the in-medium photon mass); the energy\n";
  s += "reference rounds delta_eps to 2pi x 30 GHz and keeps a convention factor that the\n";
  s += "printed formula does not reproduce. Both evaluations are reported; agreement is\n";
  s += "at order-of-magnitude level only.\n";
  return s;
}

inline std::vector<std::string> run_resolve(const RunConfig& cfg, const std::string& out_path) {
  const std::string text = resolve_report_text(cfg);
  std::fputs(text.c_str(), stdout);
  if (!out_path.empty()) {
    atomic_write(out_path, text);
    return {out_path};
  }
  return {};
}

inline std::vector<std::string> run_dispersion(const RunConfig& cfg, const std::string& out_path) {
  SpectrumGrid g = compute_spectrum(cfg);
  const DispersionCurve c = dispersion_extract(g);
  atomic_write(out_path, curve_csv_text(c, provenance_lines(cfg, "k 1/m, omega_peak rad/s")));
  return {out_path};
}

// Dispatch used by the CLI. model_override: "", "open" or "closed".
inline std::vector<std::string> run_pipeline(RunConfig cfg, const std::string& subcommand,
                                             const std::string& out_path, const std::string& pgm_path,
                                             const std::string& model_override) {
  if (model_override == "open") cfg.model = SpectrumModel::open;
  else if (model_override == "closed") cfg.model = SpectrumModel::closed;
  else if (!model_override.empty())
    throw std::invalid_argument("model must be open or closed");

  if (subcommand == "solve") return run_solve(cfg, out_path.empty() ? "solve.csv" : out_path);
  if (subcommand == "spectrum") return run_spectrum(cfg, out_path.empty() ? "spectrum.csv" : out_path);
  if (subcommand == "instrument")
    return run_instrument(cfg, out_path.empty() ? "camera.csv" : out_path,
                          pgm_path.empty() ? "camera.pgm" : pgm_path);
  if (subcommand == "resolve") return run_resolve(cfg, out_path);
  if (subcommand == "dispersion") return run_dispersion(cfg, out_path.empty() ? "dispersion.csv" : out_path);
  throw std::invalid_argument("unknown subcommand: " + subcommand);
}

}  // namespace pbec

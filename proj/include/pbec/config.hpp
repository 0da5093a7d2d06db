#pragma once

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbec/grid.hpp"
#include "pbec/instrument.hpp"
#include "pbec/io.hpp"
#include "pbec/params.hpp"
#include "pbec/sha256.hpp"
#include "pbec/spectrum_grid.hpp"

// Plain key = value configuration. '#' starts a comment; keys are validated
// against the documented set; unknown or repeated keys are rejected with line
// numbers. Values are SI throughout (rates and frequencies in rad/s).

namespace pbec {

enum class SpectrumModel { open, closed };
enum class Normalization { unit_max, raw };

struct RunConfig {
  PhysicalParams phys;
  InstrumentConfig instr;

  int grid_n = 256;                     // solver grid (power of two)
  std::optional<double> extent;         // solver box [m]; auto when absent
  int k_points = 512;
  int omega_points = 1024;
  std::optional<double> k_max;          // spectrum axis bound [1/m]; auto when absent
  std::optional<double> omega_min;      // [rad/s]; auto when absent
  std::optional<double> omega_max;      // [rad/s]; auto when absent
  SpectrumModel model = SpectrumModel::open;
  Normalization normalization = Normalization::unit_max;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw std::invalid_argument("config line " + std::to_string(line) + ": expected a number, got '" + v + "'");
  return x;
}

inline int parse_int(const std::string& v, int line) {
  const double x = parse_double(v, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw std::invalid_argument("config line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
  return i;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;  // key -> first line
  bool have_g_tilde = false, have_chi3 = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    std::string body = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string val = detail::trim(body.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("config line " + std::to_string(line) + ": expected 'key = value'");
    if (auto it = seen.find(key); it != seen.end())
      throw std::invalid_argument("config line " + std::to_string(line) + ": duplicate key '" + key +
                                  "' (first set on line " + std::to_string(it->second) + ")");
    seen[key] = line;

    auto d = [&] { return detail::parse_double(val, line); };
    auto i = [&] { return detail::parse_int(val, line); };

    if (key == "lambda_vac") cfg.phys.lambda_vac = d();
    else if (key == "n_L") cfg.phys.n_L = d();
    else if (key == "L0") cfg.phys.L0 = d();
    else if (key == "q") cfg.phys.q = i();
    else if (key == "delta_omega") cfg.phys.delta_omega = d();
    else if (key == "T") cfg.phys.T = d();
    else if (key == "N_bec") cfg.phys.N_bec = d();
    else if (key == "g_tilde") { cfg.phys.g_tilde = d(); have_g_tilde = true; }
    else if (key == "chi3") { cfg.phys.chi3 = d(); cfg.phys.g_tilde.reset(); have_chi3 = true; }
    else if (key == "Omega0") cfg.phys.Omega0 = d();
    else if (key == "gamma_net") cfg.phys.gamma_net = d();
    else if (key == "kappa_broad") cfg.phys.kappa_broad = d();
    else if (key == "sigma_dye") cfg.phys.sigma_dye = d();
    else if (key == "n_dye") cfg.phys.n_dye = d();
    else if (key == "kappa_cav") cfg.phys.kappa_cav = d();
    else if (key == "f_obj") cfg.instr.f_obj = d();
    else if (key == "L_prop") cfg.instr.L_prop = d();
    else if (key == "d_slit") cfg.instr.d_slit = d();
    else if (key == "M_y") cfg.instr.M_y = d();
    else if (key == "d_grating") cfg.instr.d_grating = d();
    else if (key == "f_im") cfg.instr.f_im = d();
    else if (key == "px_momentum") cfg.instr.px_momentum = d();
    else if (key == "px_energy") cfg.instr.px_energy = d();
    else if (key == "bit_depth") cfg.instr.bit_depth = i();
    else if (key == "full_well_fraction") cfg.instr.full_well_fraction = d();
    else if (key == "grid_n") cfg.grid_n = i();
    else if (key == "extent") cfg.extent = d();
    else if (key == "k_points") cfg.k_points = i();
    else if (key == "omega_points") cfg.omega_points = i();
    else if (key == "k_max") cfg.k_max = d();
    else if (key == "omega_min") cfg.omega_min = d();
    else if (key == "omega_max") cfg.omega_max = d();
    else if (key == "model") {
      if (val == "open") cfg.model = SpectrumModel::open;
      else if (val == "closed") cfg.model = SpectrumModel::closed;
      else throw std::invalid_argument("config line " + std::to_string(line) + ": model must be open|closed");
    } else if (key == "normalization") {
      if (val == "unit-max") cfg.normalization = Normalization::unit_max;
      else if (val == "raw") cfg.normalization = Normalization::raw;
      else throw std::invalid_argument("config line " + std::to_string(line) + ": normalization must be unit-max|raw");
    } else {
      throw std::invalid_argument("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (have_g_tilde && have_chi3)
    throw std::invalid_argument("config: ambiguous interaction source (both g_tilde and chi3 set)");
  cfg.phys.validate();
  cfg.instr.validate();
  if (!is_power_of_two(cfg.grid_n) || cfg.grid_n < 32)
    throw std::invalid_argument("config: grid_n must be a power of two, >= 32");
  if (cfg.k_points < 2 || cfg.omega_points < 2)
    throw std::invalid_argument("config: k_points and omega_points must be >= 2");
  return cfg;
}

// Canonical emission: fixed key order, 17 significant digits. Parsing the
// emitted text reproduces the config exactly; its SHA-256 is the provenance
// hash stamped on every output file.
inline std::string emit_config(const RunConfig& c) {
  std::string s;
  auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + " = " + v + "\n"; };
  auto kd = [&](const char* k, double v) { kv(k, format_g17(v)); };
  auto ki = [&](const char* k, int v) { kv(k, std::to_string(v)); };
  kd("lambda_vac", c.phys.lambda_vac);
  kd("n_L", c.phys.n_L);
  kd("L0", c.phys.L0);
  ki("q", c.phys.q);
  kd("delta_omega", c.phys.delta_omega);
  kd("T", c.phys.T);
  kd("N_bec", c.phys.N_bec);
  if (c.phys.chi3) kd("chi3", *c.phys.chi3);
  else kd("g_tilde", c.phys.g_tilde ? *c.phys.g_tilde : 1e-3);
  kd("Omega0", c.phys.Omega0);
  kd("gamma_net", c.phys.gamma_net);
  kd("kappa_broad", c.phys.kappa_broad);
  kd("sigma_dye", c.phys.sigma_dye);
  kd("n_dye", c.phys.n_dye);
  kd("kappa_cav", c.phys.kappa_cav);
  kd("f_obj", c.instr.f_obj);
  kd("L_prop", c.instr.L_prop);
  kd("d_slit", c.instr.d_slit);
  kd("M_y", c.instr.M_y);
  kd("d_grating", c.instr.d_grating);
  kd("f_im", c.instr.f_im);
  kd("px_momentum", c.instr.px_momentum);
  kd("px_energy", c.instr.px_energy);
  ki("bit_depth", c.instr.bit_depth);
  kd("full_well_fraction", c.instr.full_well_fraction);
  ki("grid_n", c.grid_n);
  if (c.extent) kd("extent", *c.extent);
  ki("k_points", c.k_points);
  ki("omega_points", c.omega_points);
  if (c.k_max) kd("k_max", *c.k_max);
  if (c.omega_min) kd("omega_min", *c.omega_min);
  if (c.omega_max) kd("omega_max", *c.omega_max);
  kv("model", c.model == SpectrumModel::open ? "open" : "closed");
  kv("normalization", c.normalization == Normalization::unit_max ? "unit-max" : "raw");
  return s;
}

inline std::string config_hash(const RunConfig& c) { return sha256_hex(emit_config(c)); }

// Spectrum axes. Defaults: 512 k-points spanning [-k_max, k_max] with
// eps(k_max) = 10 * max(mu, min(kB T / hbar, 20 mu)); 1024 omega points over
// [-5 xi_max, +5 xi_max]. All bounds overridable.
struct SpectrumAxes {
  std::vector<double> k;
  std::vector<double> omega;
};

inline SpectrumAxes spectrum_axes(const RunConfig& c) {
  const double mu = mu_thomas_fermi(c.phys);
  const double scale = std::max(mu, c.phys.Omega0);
  const double kT = constants::k_boltzmann * c.phys.T / constants::hbar;
  double kmax;
  if (c.k_max) {
    kmax = *c.k_max;
  } else {
    const double eps_target = 10.0 * std::max(scale, std::min(kT, 20.0 * scale));
    kmax = k_of_eps(eps_target, c.phys);
  }
  const double xi_max = bogoliubov_xi(eps_k(kmax, c.phys), mu);
  const double wlo = c.omega_min ? *c.omega_min : -5.0 * xi_max;
  const double whi = c.omega_max ? *c.omega_max : 5.0 * xi_max;
  if (!(whi > wlo)) throw std::invalid_argument("spectrum_axes: omega_max must exceed omega_min");
  SpectrumAxes ax;
  ax.k = linspace(-kmax, kmax, c.k_points);
  ax.omega = linspace(wlo, whi, c.omega_points);
  return ax;
}

inline double solver_extent(const RunConfig& c) {
  return c.extent ? *c.extent : default_extent(c.phys);
}

}  // namespace pbec

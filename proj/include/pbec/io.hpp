#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbec/spectrum_grid.hpp"

// File emission. Contracts:
//   grid CSV:  line 1 "# pbec-grid v1", line 2 "# <kname> <kunit>: v,v,...",
//              line 3 "# <wname> <wunit>: v,v,...", optional further "# ..."
//              provenance lines, then one comma-separated row per omega
//              (ascending), 17 significant digits.
//   PGM:       binary "P5", maxval 2^bits - 1, one byte per sample for 8-bit
//              depth and two bytes big-endian above that, rows in descending
//              omega, columns ascending k.
// All writes go through a temp file + rename so readers never see partials.

namespace pbec {

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

struct GridAxisNames {
  std::string k_name = "k_axis";
  std::string k_unit = "1/m";
  std::string w_name = "omega_axis";
  std::string w_unit = "rad/s";
};

inline std::string grid_csv_text(const SpectrumGrid& g, const GridAxisNames& names,
                                 const std::vector<std::string>& provenance) {
  std::string s;
  s.reserve(g.values.size() * 12);
  s += "# pbec-grid v1\n";
  auto axis_line = [&](const std::string& name, const std::string& unit,
                       const std::vector<double>& ax) {
    s += "# " + name + " " + unit + ":";
    for (size_t i = 0; i < ax.size(); ++i) {
      s += (i == 0 ? " " : ",");
      s += format_g17(ax[i]);
    }
    s += "\n";
  };
  axis_line(names.k_name, names.k_unit, g.k_axis);
  axis_line(names.w_name, names.w_unit, g.omega_axis);
  for (const std::string& line : provenance) s += "# " + line + "\n";
  const int nk = g.nk(), nw = g.nw();
  for (int iw = 0; iw < nw; ++iw) {
    for (int ik = 0; ik < nk; ++ik) {
      if (ik) s += ',';
      s += format_g17(g.at(ik, iw));
    }
    s += '\n';
  }
  return s;
}

inline void write_grid_csv(const std::string& path, const SpectrumGrid& g,
                           const GridAxisNames& names, const std::vector<std::string>& provenance) {
  atomic_write(path, grid_csv_text(g, names, provenance));
}

struct GridCsvFile {
  SpectrumGrid grid;
  GridAxisNames names;
  std::vector<std::string> provenance;  // extra comment lines, verbatim
};

namespace detail {
inline std::vector<double> parse_csv_doubles(const std::string& s, int line_no) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    const std::string tok = s.substr(pos, next - pos);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw std::runtime_error("grid csv line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    out.push_back(v);
    if (next == s.size()) break;
    pos = next + 1;
  }
  return out;
}
}  // namespace detail

inline GridCsvFile read_grid_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  GridCsvFile f;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || line != "# pbec-grid v1")
    throw std::runtime_error(path + ": not a pbec-grid v1 file");
  ++line_no;
  auto parse_axis = [&](std::string& name, std::string& unit) -> std::vector<double> {
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated header");
    ++line_no;
    if (line.rfind("# ", 0) != 0) throw std::runtime_error(path + ": malformed axis line");
    const size_t colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error(path + ": malformed axis line");
    std::istringstream head(line.substr(2, colon - 2));
    head >> name >> unit;
    std::string rest = line.substr(colon + 1);
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    return detail::parse_csv_doubles(rest, line_no);
  };
  f.grid.k_axis = parse_axis(f.names.k_name, f.names.k_unit);
  f.grid.omega_axis = parse_axis(f.names.w_name, f.names.w_unit);
  // remaining comment lines are provenance; afterwards, data rows
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      f.provenance.push_back(line.substr(2));
      continue;
    }
    rows.push_back(line);
  }
  const size_t nk = f.grid.k_axis.size();
  if (rows.size() != f.grid.omega_axis.size())
    throw std::runtime_error(path + ": row count does not match omega axis");
  f.grid.values.reserve(nk * rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    const std::vector<double> vals = detail::parse_csv_doubles(rows[r], static_cast<int>(r + 4));
    if (vals.size() != nk) throw std::runtime_error(path + ": row width does not match k axis");
    f.grid.values.insert(f.grid.values.end(), vals.begin(), vals.end());
  }
  return f;
}

// Binary PGM of a quantised grid (integer codes as produced by camera_stage).
// Rows run from the highest omega down, columns in ascending k.
inline std::string pgm_bytes(const SpectrumGrid& g, int bit_depth) {
  const int maxval = (1 << bit_depth) - 1;
  const int nk = g.nk(), nw = g.nw();
  std::string s = "P5\n" + std::to_string(nk) + " " + std::to_string(nw) + "\n" +
                  std::to_string(maxval) + "\n";
  if (maxval > 255) {
    s.reserve(s.size() + static_cast<size_t>(nk) * nw * 2);
    for (int iw = nw - 1; iw >= 0; --iw)
      for (int ik = 0; ik < nk; ++ik) {
        const uint16_t v = static_cast<uint16_t>(g.at(ik, iw));
        s.push_back(static_cast<char>(v >> 8));
        s.push_back(static_cast<char>(v & 0xFF));
      }
  } else {
    s.reserve(s.size() + static_cast<size_t>(nk) * nw);
    for (int iw = nw - 1; iw >= 0; --iw)
      for (int ik = 0; ik < nk; ++ik) s.push_back(static_cast<char>(static_cast<uint8_t>(g.at(ik, iw))));
  }
  return s;
}

inline void write_pgm(const std::string& path, const SpectrumGrid& g, int bit_depth) {
  atomic_write(path, pgm_bytes(g, bit_depth));
}

// Curve CSV used by the dispersion subcommand.
inline std::string curve_csv_text(const DispersionCurve& c, const std::vector<std::string>& provenance) {
  std::string s = "# pbec-curve v1\n# columns: k_1/m,omega_peak_rad/s,valid\n";
  for (const std::string& line : provenance) s += "# " + line + "\n";
  for (size_t i = 0; i < c.k.size(); ++i) {
    s += format_g17(c.k[i]);
    s += ',';
    s += c.valid[i] ? format_g17(c.omega_peak[i]) : std::string("nan");
    s += ',';
    s += c.valid[i] ? '1' : '0';
    s += '\n';
  }
  return s;
}

}  // namespace pbec

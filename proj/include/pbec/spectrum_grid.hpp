#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pbec {

// Rectangular intensity map over (k, omega). omega is measured relative to
// the chemical potential, in rad/s; values are in arbitrary units and
// non-negative for physical photoluminescence output. Storage is row-major
// with one row per omega: values[iw * nk + ik].
struct SpectrumGrid {
  std::vector<double> k_axis;      // [1/m], strictly increasing
  std::vector<double> omega_axis;  // [rad/s], strictly increasing
  std::vector<double> values;

  int nk() const { return static_cast<int>(k_axis.size()); }
  int nw() const { return static_cast<int>(omega_axis.size()); }
  double& at(int ik, int iw) { return values[static_cast<size_t>(iw) * k_axis.size() + ik]; }
  double at(int ik, int iw) const { return values[static_cast<size_t>(iw) * k_axis.size() + ik]; }

  void validate(bool require_nonnegative = true) const {
    if (k_axis.size() < 2 || omega_axis.size() < 2)
      throw std::invalid_argument("SpectrumGrid: axes need at least two samples");
    for (size_t i = 1; i < k_axis.size(); ++i)
      if (!(k_axis[i] > k_axis[i - 1])) throw std::invalid_argument("SpectrumGrid: k_axis not strictly increasing");
    for (size_t i = 1; i < omega_axis.size(); ++i)
      if (!(omega_axis[i] > omega_axis[i - 1]))
        throw std::invalid_argument("SpectrumGrid: omega_axis not strictly increasing");
    if (values.size() != k_axis.size() * omega_axis.size())
      throw std::invalid_argument("SpectrumGrid: value count does not match axes");
    for (double v : values) {
      if (!std::isfinite(v)) throw std::invalid_argument("SpectrumGrid: non-finite value");
      if (require_nonnegative && v < 0) throw std::invalid_argument("SpectrumGrid: negative value");
    }
  }

  double max_value() const {
    double m = 0;
    for (double v : values) m = std::max(m, v);
    return m;
  }

  // Scales so the maximum becomes 1; no-op on an all-zero grid.
  void normalize_unit_max() {
    const double m = max_value();
    if (m > 0)
      for (double& v : values) v /= m;
  }
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace: need n >= 2");
  std::vector<double> v(n);
  const double d = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + d * i;
  v.back() = hi;
  return v;
}

struct DispersionCurve {
  std::vector<double> k;           // [1/m]
  std::vector<double> omega_peak;  // [rad/s]; NaN where no interior maximum
  std::vector<char> valid;
};

// Ridge extraction: per k column, the location of the maximum over omega > 0,
// refined by a 3-point parabolic fit. Columns whose maximum sits on the edge
// of the positive-omega range are flagged invalid.
inline DispersionCurve dispersion_extract(const SpectrumGrid& g) {
  const int nk = g.nk(), nw = g.nw();
  DispersionCurve out;
  out.k = g.k_axis;
  out.omega_peak.assign(nk, std::nan(""));
  out.valid.assign(nk, 0);
  int iw0 = 0;
  while (iw0 < nw && !(g.omega_axis[iw0] > 0)) ++iw0;
  if (nw - iw0 < 3) return out;
  for (int ik = 0; ik < nk; ++ik) {
    int jbest = iw0;
    double vbest = g.at(ik, iw0);
    for (int iw = iw0 + 1; iw < nw; ++iw) {
      const double v = g.at(ik, iw);
      if (v > vbest) {
        vbest = v;
        jbest = iw;
      }
    }
    if (jbest <= iw0 || jbest >= nw - 1) continue;  // no interior maximum
    const double y0 = g.at(ik, jbest - 1), y1 = g.at(ik, jbest), y2 = g.at(ik, jbest + 1);
    const double denom = y0 - 2.0 * y1 + y2;
    double w = g.omega_axis[jbest];
    if (denom < 0) {
      const double off = 0.5 * (y0 - y2) / denom;
      // local spacing; axes may be non-uniform
      const double dw = 0.5 * (g.omega_axis[jbest + 1] - g.omega_axis[jbest - 1]);
      w += off * dw;
    }
    out.omega_peak[ik] = w;
    out.valid[ik] = 1;
  }
  return out;
}

}  // namespace pbec

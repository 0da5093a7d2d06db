#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace pbec {

// Adaptive Gauss-Legendre quadrature. Each segment is estimated with a
// 15-point rule; the gap to the embedded 7-point rule drives bisection.

namespace detail {

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 7> gl7_x = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
inline constexpr std::array<double, 7> gl7_w = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 15> gl15_x = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345, 0.3941513470775634, 0.5709721726085388, 0.7244177313601701,
    0.8482065834104272, 0.9372733924007060, 0.9879925180204854};
inline constexpr std::array<double, 15> gl15_w = {
    0.03075324199611727, 0.07036604748810812, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.07036604748810812, 0.03075324199611727};

template <class F>
inline void gl_pair(const F& f, double a, double b, double& i15, double& i7, double& abs15) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  i15 = 0;
  abs15 = 0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * gl15_x[i]);
    i15 += gl15_w[i] * v;
    abs15 += gl15_w[i] * std::abs(v);
  }
  i15 *= h;
  abs15 *= h;
  i7 = 0;
  for (int i = 0; i < 7; ++i) i7 += gl7_w[i] * f(c + h * gl7_x[i]);
  i7 *= h;
}

}  // namespace detail

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;  // achieved estimate
  bool converged = true;
};

// Integrates f on [a, b] to absolute tolerance tol_abs. Depth-first bisection;
// segments whose 7/15 gap is below their share of the tolerance are accepted.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double tol_abs,
                                    int max_depth = 40) {
  QuadratureResult res;
  struct Seg {
    double a, b, tol;
    int depth;
  };
  std::array<Seg, 256> stack;
  int top = 0;
  stack[top++] = {a, b, tol_abs, 0};
  while (top > 0) {
    const Seg s = stack[--top];
    double i15, i7, abs15;
    detail::gl_pair(f, s.a, s.b, i15, i7, abs15);
    const double err = std::abs(i15 - i7);
    if (err <= s.tol || s.depth >= max_depth || top > static_cast<int>(stack.size()) - 3) {
      res.value += i15;
      res.abs_error += err;
      if (err > s.tol) res.converged = false;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    stack[top++] = {s.a, m, 0.5 * s.tol, s.depth + 1};
    stack[top++] = {m, s.b, 0.5 * s.tol, s.depth + 1};
  }
  return res;
}

}  // namespace pbec

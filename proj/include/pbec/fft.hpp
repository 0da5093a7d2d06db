#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "pbec/constants.hpp"
#include "pbec/parallel.hpp"

namespace pbec {

using cplx = std::complex<double>;

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 complex FFT for power-of-two lengths. Precomputes the
// bit-reversal permutation and the twiddle table once per length, so repeated
// transforms (the split-step loop) are cheap and bit-reproducible.
class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("Fft: length must be a power of two");
    log2n_ = 0;
    while ((1 << log2n_) < n_) ++log2n_;
    rev_.resize(n_);
    for (int i = 1; i < n_; ++i) rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1) << (log2n_ - 1));
    tw_.resize(n_ / 2);
    for (int k = 0; k < n_ / 2; ++k) {
      double ang = -constants::two_pi * k / n_;
      tw_[k] = cplx(std::cos(ang), std::sin(ang));
    }
  }

  int size() const { return n_; }

  // In-place DFT, no scaling: X[k] = sum_j x[j] e^{-2pi i jk/n}.
  void forward(cplx* a) const {
    for (int i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (int len = 2; len <= n_; len <<= 1) {
      int half = len >> 1;
      int stride = n_ / len;
      for (int base = 0; base < n_; base += len) {
        for (int j = 0; j < half; ++j) {
          cplx u = a[base + j];
          cplx v = a[base + j + half] * tw_[j * stride];
          a[base + j] = u + v;
          a[base + j + half] = u - v;
        }
      }
    }
  }

  // In-place inverse with 1/n scaling; forward followed by inverse is identity
  // up to roundoff.
  void inverse(cplx* a) const {
    for (int i = 0; i < n_; ++i) a[i] = std::conj(a[i]);
    forward(a);
    double s = 1.0 / n_;
    for (int i = 0; i < n_; ++i) a[i] = std::conj(a[i]) * s;
  }

 private:
  int n_;
  int log2n_;
  std::vector<int> rev_;
  std::vector<cplx> tw_;
};

namespace detail {
inline void transpose_square(cplx* a, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) std::swap(a[i * n + j], a[j * n + i]);
}
}  // namespace detail

// 2D transform of an n-by-n row-major array: rows, transpose, rows, transpose.
// Row transforms run in parallel; output is independent of the worker count.
inline void fft2(cplx* a, int n, const Fft& plan, bool inverse_transform) {
  if (plan.size() != n) throw std::invalid_argument("fft2: plan length mismatch");
  auto pass = [&](cplx* data) {
    parallel_for(n, [&](long row) {
      cplx* p = data + row * n;
      if (inverse_transform)
        plan.inverse(p);
      else
        plan.forward(p);
    });
  };
  pass(a);
  detail::transpose_square(a, n);
  pass(a);
  detail::transpose_square(a, n);
}

// FFT wavenumber for bin i of an n-point axis with spacing dx, in the usual
// wrap-around ordering: 2*pi*{0,1,...,n/2-1,-n/2,...,-1}/(n*dx).
inline double fft_wavenumber(int i, int n, double dx) {
  int f = (i < n / 2) ? i : i - n;
  return constants::two_pi * f / (n * dx);
}

}  // namespace pbec

#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace ftnisac::detail {

/// Iterative radix-2 complex FFT with precomputed twiddles and bit-reversal
/// table. Sizes must be powers of two; callers zero-pad. Used for batched
/// ambiguity-function evaluation where one factor of a convolution is reused
/// across many trials.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n), rev_(n), tw_(n / 2) {
    assert(n >= 2 && (n & (n - 1)) == 0);
    int logn = 0;
    while ((std::size_t{1} << logn) < n) ++logn;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < logn; ++b) {
        r = (r << 1) | ((i >> b) & 1u);
      }
      rev_[i] = r;
    }
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
      tw_[k] = {std::cos(ang), std::sin(ang)};
    }
  }

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* a) const { transform(a, false); }

  void inverse(std::complex<double>* a) const {
    transform(a, true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
  }

 private:
  void transform(std::complex<double>* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t step = n_ / len;
      const std::size_t half = len / 2;
      for (std::size_t base = 0; base < n_; base += len) {
        for (std::size_t k = 0; k < half; ++k) {
          std::complex<double> w = tw_[k * step];
          if (inv) w = std::conj(w);
          const std::complex<double> u = a[base + k];
          const std::complex<double> v = a[base + k + half] * w;
          a[base + k] = u + v;
          a[base + k + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<std::complex<double>> tw_;
};

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace ftnisac::detail

#pragma once

// Shared test oracles. Everything here is an independent route to a quantity
// the library computes another way: time-domain pulse models and trapezoid
// integrals, a plain fine-grid frequency AF, 2-D panel quadrature, and
// eigenvalue extremes via power iteration. None of it calls the production
// frequency-quadrature paths it is used to check.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "ftnisac/detail/linalg.hpp"
#include "ftnisac/detail/rng.hpp"
#include "ftnisac/pulse.hpp"

namespace testsupport {

inline double sinc(double x) {
  if (std::fabs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// Unit-energy time-domain waveform of the shaping pulse.
inline double pulse_time(const ftnisac::PulseSpec& p, double t) {
  const double T = p.nyquist_period;
  if (p.family == ftnisac::PulseFamily::sinc) {
    return sinc(t / T) / std::sqrt(T);
  }
  const double beta = p.roll_off;
  const double x = t / T;
  if (beta == 0.0) return sinc(x) / std::sqrt(T);
  if (std::fabs(std::fabs(4.0 * beta * x) - 1.0) < 1e-9) {
    const double a = std::numbers::pi / (4.0 * beta);
    return (beta / std::sqrt(2.0 * T)) *
           ((1.0 + 2.0 / std::numbers::pi) * std::sin(a) +
            (1.0 - 2.0 / std::numbers::pi) * std::cos(a));
  }
  if (std::fabs(x) < 1e-9) {
    return (1.0 - beta + 4.0 * beta / std::numbers::pi) / std::sqrt(T);
  }
  const double num = std::sin(std::numbers::pi * x * (1.0 - beta)) +
                     4.0 * beta * x *
                         std::cos(std::numbers::pi * x * (1.0 + beta));
  const double den =
      std::numbers::pi * x * (1.0 - 16.0 * beta * beta * x * x);
  return num / den / std::sqrt(T);
}

/// Trapezoid inner product of the pulse with its shifted copy.
inline double pulse_inner_product(const ftnisac::PulseSpec& p, double shift,
                                  double span = 128.0, double dt = 1.0 / 512) {
  double acc = 0.0;
  for (double t = -span; t <= span; t += dt) {
    acc += pulse_time(p, t) * pulse_time(p, t + shift);
  }
  return acc * dt;
}

/// Time-domain ambiguity integral of the synthesized symbol train.
inline std::complex<double> waveform_af(
    const ftnisac::PulseSpec& p, std::span<const std::complex<double>> x,
    double compression, double symbol_energy, double delay, double doppler,
    double span = 80.0, double dt = 1.0 / 512) {
  const double xi_t = compression * p.nyquist_period;
  std::complex<double> acc{};
  for (double t = -span; t <= span; t += dt) {
    std::complex<double> s1{};
    std::complex<double> s2{};
    for (std::size_t n = 1; n <= x.size(); ++n) {
      s1 += x[n - 1] * pulse_time(p, t - n * xi_t);
      s2 += x[n - 1] * pulse_time(p, t - delay - n * xi_t);
    }
    acc += s1 * std::conj(s2) *
           std::polar(1.0, -2.0 * std::numbers::pi * doppler * (t - delay));
  }
  return acc * dt * symbol_energy;
}

/// Fine-grid trapezoid evaluation of the pulse ambiguity function over the
/// spectral overlap band.
inline std::complex<double> trapezoid_pulse_af(const ftnisac::PulseSpec& p,
                                               double delay, double doppler,
                                               double df = 1e-4) {
  const double half_w = 0.5 * ftnisac::bandwidth(p);
  const double lo = std::max(-half_w, doppler - half_w);
  const double hi = std::min(half_w, doppler + half_w);
  if (!(hi > lo)) return {};
  std::complex<double> acc{};
  const int n = static_cast<int>(std::ceil((hi - lo) / df));
  const double h = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) {
    const double f = lo + i * h;
    const double v = ftnisac::spectrum_amp(p, f) *
                     ftnisac::spectrum_amp(p, f - doppler);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * std::polar(v, 2.0 * std::numbers::pi * f * delay);
  }
  return acc * h;
}

/// Composite Gauss-Legendre 8 with uniform panels on each axis.
template <class F>
double gauss2d(F&& f, double ax, double bx, int panels_x, double ay,
               double by, int panels_y) {
  static const double nodes[4] = {0.1834346424956498, 0.5255324099163290,
                                  0.7966664774136267, 0.9602898564975363};
  static const double weights[4] = {0.3626837833783620, 0.3137066458778873,
                                    0.2223810344533745, 0.1012285362903763};
  std::vector<double> xs;
  std::vector<double> wx;
  const auto fill_axis = [&](double a, double b, int panels,
                             std::vector<double>& pts,
                             std::vector<double>& wts) {
    const double len = (b - a) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double c = a + (pnl + 0.5) * len;
      const double h = 0.5 * len;
      for (int q = 0; q < 4; ++q) {
        pts.push_back(c - h * nodes[q]);
        wts.push_back(weights[q] * h);
        pts.push_back(c + h * nodes[q]);
        wts.push_back(weights[q] * h);
      }
    }
  };
  fill_axis(ax, bx, panels_x, xs, wx);
  std::vector<double> ys;
  std::vector<double> wy;
  fill_axis(ay, by, panels_y, ys, wy);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      inner += wy[j] * f(xs[i], ys[j]);
    }
    acc += wx[i] * inner;
  }
  return acc;
}

/// Largest eigenvalue of a dense symmetric matrix by power iteration.
inline double max_eigenvalue(const std::vector<double>& a, int n,
                             int iters = 400) {
  ftnisac::detail::Rng rng(9001);
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform01() - 0.5;
  std::vector<double> w(n);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += a[i * n + j] * v[j];
      w[i] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    lambda = 0.0;
    for (int i = 0; i < n; ++i) {
      lambda += v[i] * w[i];
      v[i] = w[i] / norm;
    }
  }
  return lambda;
}

/// Smallest eigenvalue via inverse power iteration with a Cholesky solve.
inline double min_eigenvalue(const std::vector<double>& a, int n,
                             int iters = 400) {
  const auto l = ftnisac::detail::cholesky_factor_real(a, n);
  ftnisac::detail::Rng rng(9002);
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform01() - 0.5;
  for (int it = 0; it < iters; ++it) {
    ftnisac::detail::llt_solve_real(l, n, v);
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    for (auto& e : v) e /= norm;
  }
  // Rayleigh quotient of the converged vector
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a[i * n + j] * v[j];
    num += v[i] * s;
  }
  return num;
}

}  // namespace testsupport

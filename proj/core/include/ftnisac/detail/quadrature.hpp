#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ftnisac::detail {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 abscissae/weights) plus an
// 8-point Gauss-Legendre rule for fixed-panel evaluation. All integrands in
// this library are piecewise smooth with analytically known kink locations,
// so the adaptive driver takes an explicit breakpoint list and splits the
// initial interval there before refining.

inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

inline constexpr double kGl8Nodes[4] = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
    0.9602898564975363};
inline constexpr double kGl8Weights[4] = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};

template <class T>
inline double error_norm(const T& v) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return std::abs(v);
  } else {
    return std::fabs(v);
  }
}

/// One Gauss-Kronrod 7-15 panel. Returns the K15 estimate, writes the
/// |K15 - G7| error indicator.
template <class F>
auto gk15_panel(F&& f, double a, double b, double* err)
    -> decltype(f(a)) {
  using R = decltype(f(a));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const R fc = f(c);
  R resk = kGk15Weights[7] * fc;
  R resg = kGauss7Weights[3] * fc;
  for (int j = 0; j < 3; ++j) {
    const double x = h * kGk15Nodes[2 * j + 1];
    const R f1 = f(c - x);
    const R f2 = f(c + x);
    resg += kGauss7Weights[j] * (f1 + f2);
    resk += kGk15Weights[2 * j + 1] * (f1 + f2);
  }
  for (int j = 0; j < 4; ++j) {
    const double x = h * kGk15Nodes[2 * j];
    resk += kGk15Weights[2 * j] * (f(c - x) + f(c + x));
  }
  *err = error_norm<R>((resk - resg) * h);
  return resk * h;
}

template <class F>
auto gk15_adaptive(F&& f, double a, double b, double tol, int depth)
    -> decltype(f(a)) {
  double err = 0.0;
  auto whole = gk15_panel(f, a, b, &err);
  if (err <= tol || depth <= 0 || (b - a) < 1e-14 * (1.0 + std::fabs(a))) {
    return whole;
  }
  const double c = 0.5 * (a + b);
  return gk15_adaptive(f, a, c, 0.5 * tol, depth - 1) +
         gk15_adaptive(f, c, b, 0.5 * tol, depth - 1);
}

/// Adaptive integration of f over [a, b]. `breakpoints` lists abscissae where
/// the integrand (or a derivative) is known to jump; points outside (a, b)
/// are ignored. `abs_tol` is an absolute tolerance on the whole integral.
template <class F>
auto integrate(F&& f, double a, double b, std::span<const double> breakpoints,
               double abs_tol = 1e-12, int max_depth = 40)
    -> decltype(f(a)) {
  using R = decltype(f(a));
  if (!(b > a)) return R{};
  std::vector<double> knots;
  knots.push_back(a);
  for (double x : breakpoints) {
    if (x > a + 1e-15 && x < b - 1e-15) knots.push_back(x);
  }
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double u, double v) {
                            return std::fabs(u - v) < 1e-15;
                          }),
              knots.end());
  R total{};
  const double span = b - a;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double tol = abs_tol * std::max((hi - lo) / span, 1e-3);
    total += gk15_adaptive(f, lo, hi, tol, max_depth);
  }
  return total;
}

/// Fixed 8-point Gauss-Legendre rule on [a, b].
template <class F>
auto gl8(F&& f, double a, double b) -> decltype(f(a)) {
  using R = decltype(f(a));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  R acc{};
  for (int j = 0; j < 4; ++j) {
    const double x = h * kGl8Nodes[j];
    acc += kGl8Weights[j] * (f(c - x) + f(c + x));
  }
  return acc * h;
}

}  // namespace ftnisac::detail

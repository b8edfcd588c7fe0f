#include "ftnisac/isi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftnisac/detail/quadrature.hpp"

namespace ftnisac {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_compression(double compression) {
  if (!(compression > 0.0 && compression <= 1.0)) {
    throw std::invalid_argument("isi: compression must lie in (0, 1]");
  }
}

// Spectrum knots plus a uniform split at half the oscillation period of
// cos(2 pi f t_shift), so each panel is smooth and slowly varying.
std::vector<double> oscillation_breakpoints(const PulseSpec& pulse,
                                            double t_shift) {
  std::vector<double> knots = spectrum_breakpoints(pulse);
  const double half_w = 0.5 * bandwidth(pulse);
  const double at = std::fabs(t_shift);
  if (at * half_w > 0.5) {
    const double step = 0.5 / at;
    for (double x = -half_w + step; x < half_w; x += step) knots.push_back(x);
  }
  return knots;
}
}  // namespace

double isi_coefficient(const PulseSpec& pulse, double compression, int k,
                       double delay) {
  check_compression(compression);
  const double t_shift = k * compression * pulse.nyquist_period + delay;
  const double half_w = 0.5 * bandwidth(pulse);
  const auto knots = oscillation_breakpoints(pulse, t_shift);
  return detail::integrate(
      [&](double f) {
        return spectrum_sq(pulse, f) * std::cos(kTwoPi * f * t_shift);
      },
      -half_w, half_w, knots, 1e-12);
}

std::vector<double> isi_coefficient_row(const PulseSpec& pulse,
                                        double compression, double delay,
                                        int k_max) {
  check_compression(compression);
  if (k_max < 0) throw std::invalid_argument("isi: k_max must be >= 0");
  const double xi_t = compression * pulse.nyquist_period;
  const double half_w = 0.5 * bandwidth(pulse);
  const double t_fast = k_max * xi_t + std::fabs(delay);

  // Panel edges: spectrum knots plus half-period subdivision for the fastest
  // oscillation present in the row.
  std::vector<double> edges = spectrum_breakpoints(pulse);
  edges.push_back(-half_w);
  edges.push_back(half_w);
  const double max_len = t_fast > 1e-12 ? 0.5 / t_fast : 2.0 * half_w;
  std::sort(edges.begin(), edges.end());
  std::vector<double> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    if (hi - lo < 1e-15) continue;
    const int pieces =
        std::max(1, static_cast<int>(std::ceil((hi - lo) / max_len)));
    for (int p = 0; p < pieces; ++p) {
      panels.push_back(lo + (hi - lo) * p / pieces);
    }
  }
  panels.push_back(half_w);

  std::vector<double> row(2 * k_max + 1, 0.0);
  const std::complex<double> j2pi(0.0, kTwoPi);
  for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
    const double a = panels[p];
    const double b = panels[p + 1];
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (int half = 0; half < 2; ++half) {
      for (int q = 0; q < 4; ++q) {
        const double f = half == 0 ? c - h * detail::kGl8Nodes[q]
                                   : c + h * detail::kGl8Nodes[q];
        const double wv = detail::kGl8Weights[q] * h * spectrum_sq(pulse, f);
        if (wv == 0.0) continue;
        const std::complex<double> base = std::exp(j2pi * (f * delay));
        const std::complex<double> step = std::exp(j2pi * (f * xi_t));
        std::complex<double> cur = base;
        for (int k = 0; k <= k_max; ++k) {
          row[k_max + k] += wv * cur.real();
          cur *= step;
          if ((k & 255) == 255) cur /= std::abs(cur);
        }
        cur = base * std::conj(step);
        for (int k = 1; k <= k_max; ++k) {
          row[k_max - k] += wv * cur.real();
          cur *= std::conj(step);
          if ((k & 255) == 255) cur /= std::abs(cur);
        }
      }
    }
  }
  return row;
}

IsiMatrix build_isi_matrix(const PulseSpec& pulse, double compression,
                           int size, double delay) {
  if (size < 1) throw std::invalid_argument("isi: matrix size must be >= 1");
  const auto row = isi_coefficient_row(pulse, compression, delay, size - 1);
  IsiMatrix m;
  m.size = size;
  m.delay = delay;
  m.entries.resize(static_cast<std::size_t>(size) * size);
  for (int n = 0; n < size; ++n) {
    for (int c = 0; c < size; ++c) {
      m.entries[static_cast<std::size_t>(n) * size + c] =
          row[(c - n) + (size - 1)];
    }
  }
  return m;
}

std::complex<double> dirichlet_kernel(double x, int n_symbols,
                                      double symbol_period) {
  if (n_symbols < 1) {
    throw std::invalid_argument("dirichlet_kernel: n_symbols must be >= 1");
  }
  const double phase = kPi * x * symbol_period;
  const std::complex<double> lead =
      std::polar(1.0, phase * (n_symbols + 1));
  const double den = std::sin(phase);
  if (std::fabs(den) < 1e-9) {
    // series limit at x * symbol_period integer; the cosine ratio carries
    // the (-1)^(m(N-1)) parity so the sum stays exactly N at every period
    const double ratio =
        n_symbols * std::cos(phase * n_symbols) / std::cos(phase);
    return ratio * lead;
  }
  return lead * (std::sin(phase * n_symbols) / den);
}

}  // namespace ftnisac

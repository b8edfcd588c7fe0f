#include "ftnisac/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftnisac/detail/quadrature.hpp"
#include "ftnisac/isi.hpp"

namespace ftnisac {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMomentTol = 1e-12;

Constellation validated(std::string name,
                        std::vector<std::complex<double>> points) {
  if (points.empty()) {
    throw std::invalid_argument("constellation: needs at least one point");
  }
  std::complex<double> mean{};
  std::complex<double> pseudo{};
  double power = 0.0;
  for (const auto& a : points) {
    mean += a;
    pseudo += a * a;
    power += std::norm(a);
  }
  const double inv = 1.0 / static_cast<double>(points.size());
  mean *= inv;
  pseudo *= inv;
  power *= inv;
  if (std::abs(mean) > kMomentTol) {
    throw std::invalid_argument("constellation '" + name +
                                "': mean is not zero");
  }
  if (std::abs(pseudo) > kMomentTol) {
    throw std::invalid_argument(
        "constellation '" + name +
        "': second pseudo-moment is not zero (not rotationally symmetric)");
  }
  if (std::fabs(power - 1.0) > kMomentTol) {
    throw std::invalid_argument("constellation '" + name +
                                "': power is not 1");
  }
  Constellation c;
  c.name = std::move(name);
  c.points = std::move(points);
  return c;
}

std::vector<std::complex<double>> square_grid(int levels, double scale) {
  std::vector<std::complex<double>> pts;
  for (int i = 0; i < levels; ++i) {
    for (int q = 0; q < levels; ++q) {
      const double re = (2 * i - levels + 1) * scale;
      const double im = (2 * q - levels + 1) * scale;
      pts.emplace_back(re, im);
    }
  }
  return pts;
}

// Spectral overlap band of Hp(f) and Hp(f - doppler); empty when
// |doppler| >= W.
bool overlap_band(const PulseSpec& pulse, double doppler, double* lo,
                  double* hi) {
  const double half_w = 0.5 * bandwidth(pulse);
  *lo = std::max(-half_w, doppler - half_w);
  *hi = std::min(half_w, doppler + half_w);
  return *hi - *lo > 0.0;
}

void check_symbols(int n_symbols) {
  if (n_symbols < 1) {
    throw std::invalid_argument("ambiguity: n_symbols must be >= 1");
  }
}
}  // namespace

Constellation Constellation::qpsk() {
  const double s = std::numbers::sqrt2 / 2.0;
  return validated("qpsk", {{s, s}, {-s, s}, {-s, -s}, {s, -s}});
}

Constellation Constellation::psk8() {
  std::vector<std::complex<double>> pts;
  for (int k = 0; k < 8; ++k) {
    pts.push_back(std::polar(1.0, kTwoPi * k / 8.0));
  }
  return validated("8psk", std::move(pts));
}

Constellation Constellation::qam16() {
  return validated("16qam", square_grid(4, 1.0 / std::sqrt(10.0)));
}

Constellation Constellation::qam64() {
  return validated("64qam", square_grid(8, 1.0 / std::sqrt(42.0)));
}

Constellation Constellation::gaussian() {
  Constellation c;
  c.name = "gaussian";
  c.analytic = true;
  return c;
}

Constellation Constellation::from_points(
    std::string name, std::vector<std::complex<double>> points) {
  return validated(std::move(name), std::move(points));
}

double kurtosis(const Constellation& c) {
  if (c.analytic) return 2.0;
  if (c.points.empty()) {
    throw std::invalid_argument("kurtosis: empty constellation");
  }
  double acc = 0.0;
  for (const auto& a : c.points) {
    const double p = std::norm(a);
    acc += p * p;
  }
  return acc / static_cast<double>(c.points.size());
}

std::complex<double> pulse_af(const PulseSpec& pulse, double delay,
                              double doppler) {
  double lo = 0.0;
  double hi = 0.0;
  if (!overlap_band(pulse, doppler, &lo, &hi)) return {};
  std::vector<double> knots = spectrum_breakpoints(pulse);
  for (double b : spectrum_breakpoints(pulse)) knots.push_back(b + doppler);
  const double at = std::fabs(delay);
  if (at * (hi - lo) > 0.5) {
    const double step = 0.5 / at;
    for (double x = lo + step; x < hi; x += step) knots.push_back(x);
  }
  return detail::integrate(
      [&](double f) {
        const double amp2 = spectrum_amp(pulse, f) *
                            spectrum_amp(pulse, f - doppler);
        return std::polar(amp2, kTwoPi * f * delay);
      },
      lo, hi, knots, 1e-12);
}

std::vector<std::complex<double>> pulse_af_row(const PulseSpec& pulse,
                                               double doppler, double step,
                                               int m_max, double shift) {
  if (m_max < 0) throw std::invalid_argument("pulse_af_row: m_max >= 0");
  std::vector<std::complex<double>> row(2 * m_max + 1);
  double lo = 0.0;
  double hi = 0.0;
  if (!overlap_band(pulse, doppler, &lo, &hi)) return row;

  std::vector<double> edges{lo, hi};
  for (double b : spectrum_breakpoints(pulse)) {
    edges.push_back(b);
    edges.push_back(b + doppler);
  }
  std::sort(edges.begin(), edges.end());
  const double t_fast = m_max * std::fabs(step) + std::fabs(shift);
  const double max_len = t_fast > 1e-12 ? 0.5 / t_fast : hi - lo;

  std::vector<double> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = std::max(edges[i], lo);
    const double b = std::min(edges[i + 1], hi);
    if (b - a < 1e-15) continue;
    const int pieces =
        std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
    for (int p = 0; p < pieces; ++p) panels.push_back(a + (b - a) * p / pieces);
  }
  panels.push_back(hi);

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
        const double amp2 =
            spectrum_amp(pulse, f) * spectrum_amp(pulse, f - doppler);
        if (amp2 == 0.0) continue;
        const double wv = detail::kGl8Weights[q] * h * amp2;
        const std::complex<double> base = std::exp(j2pi * (f * shift));
        const std::complex<double> w = std::exp(j2pi * (f * step));
        std::complex<double> cur = base;
        for (int m = 0; m <= m_max; ++m) {
          row[m_max + m] += wv * cur;
          cur *= w;
          if ((m & 255) == 255) cur /= std::abs(cur);
        }
        cur = base * std::conj(w);
        for (int m = 1; m <= m_max; ++m) {
          row[m_max - m] += wv * cur;
          cur *= std::conj(w);
          if ((m & 255) == 255) cur /= std::abs(cur);
        }
      }
    }
  }
  return row;
}

namespace {
struct SqAfTerms {
  double mean_sq;   // Dirichlet term
  double excess;    // N (kurtosis - 2) |AF_p|^2 term
  double pedestal;  // (N - |m|)-weighted AF sum
};

SqAfTerms sq_af_terms(const PulseSpec& pulse, double compression,
                      int n_symbols, double kurt, double delay, double doppler,
                      double symbol_energy) {
  check_symbols(n_symbols);
  if (!(kurt >= 1.0)) {
    throw std::invalid_argument("expected_sq_af: kurtosis must be >= 1");
  }
  const double xi_t = compression * pulse.nyquist_period;
  const auto row = pulse_af_row(pulse, doppler, xi_t, n_symbols - 1, -delay);
  const double af0_sq = std::norm(row[n_symbols - 1]);  // |AF_p(-delay, nu)|^2
  double pedestal = 0.0;
  for (int m = -(n_symbols - 1); m <= n_symbols - 1; ++m) {
    pedestal += (n_symbols - std::abs(m)) * std::norm(row[m + n_symbols - 1]);
  }
  const double dir = std::norm(dirichlet_kernel(doppler, n_symbols, xi_t));
  const double es_sq = symbol_energy * symbol_energy;
  return {es_sq * dir * af0_sq, es_sq * n_symbols * (kurt - 2.0) * af0_sq,
          es_sq * pedestal};
}
}  // namespace

double expected_sq_af(const PulseSpec& pulse, double compression,
                      int n_symbols, double kurt, double delay, double doppler,
                      double symbol_energy) {
  const auto t = sq_af_terms(pulse, compression, n_symbols, kurt, delay,
                             doppler, symbol_energy);
  return t.mean_sq + t.excess + t.pedestal;
}

IcebergParts iceberg_decomposition(const PulseSpec& pulse, double compression,
                                   int n_symbols, double kurt, double delay,
                                   double doppler, double symbol_energy) {
  const auto t = sq_af_terms(pulse, compression, n_symbols, kurt, delay,
                             doppler, symbol_energy);
  return {t.mean_sq, t.excess + t.pedestal};
}

std::complex<double> signal_af(std::span<const std::complex<double>> symbols,
                               const PulseSpec& pulse, double compression,
                               double delay, double doppler,
                               double symbol_energy) {
  const int n = static_cast<int>(symbols.size());
  check_symbols(n);
  const double xi_t = compression * pulse.nyquist_period;
  // AF_p((n' - n) xi T + delay, doppler); the +delay keeps the value equal
  // to the ambiguity integral of the synthesized waveform
  const auto row = pulse_af_row(pulse, doppler, xi_t, n - 1, delay);
  std::vector<std::complex<double>> phase(n + 1);
  for (int np = 1; np <= n; ++np) {
    phase[np] = std::polar(1.0, -kTwoPi * np * doppler * xi_t);
  }
  std::complex<double> acc{};
  for (int np = 1; np <= n; ++np) {
    std::complex<double> inner{};
    for (int m = 1; m <= n; ++m) {
      inner += symbols[m - 1] * row[(np - m) + n - 1];
    }
    acc += std::conj(symbols[np - 1]) * phase[np] * inner;
  }
  return symbol_energy * acc;
}

double accumulated_isi(const PulseSpec& pulse, double compression,
                       int n_symbols, double delay) {
  check_symbols(n_symbols);
  const double xi_t = compression * pulse.nyquist_period;
  const auto row = pulse_af_row(pulse, 0.0, xi_t, n_symbols - 1, -delay);
  double acc = 0.0;
  for (int m = -(n_symbols - 1); m <= n_symbols - 1; ++m) {
    acc += (n_symbols - std::abs(m)) * std::norm(row[m + n_symbols - 1]);
  }
  return acc;
}

double dirichlet_sq(double freq_offset, int n_symbols, double symbol_period) {
  return std::norm(dirichlet_kernel(freq_offset, n_symbols, symbol_period));
}

double doppler_accumulated_isi(const PulseSpec& pulse, double compression,
                               int n_symbols, double doppler) {
  check_symbols(n_symbols);
  const double xi_t = compression * pulse.nyquist_period;
  const auto row = pulse_af_row(pulse, doppler, xi_t, n_symbols - 1, 0.0);
  double acc = 0.0;
  for (int m = -(n_symbols - 1); m <= n_symbols - 1; ++m) {
    acc += (n_symbols - std::abs(m)) * std::norm(row[m + n_symbols - 1]);
  }
  return acc;
}

double periodic_doppler_variation(const PulseSpec& pulse, double compression,
                                  int n_symbols, double doppler) {
  check_symbols(n_symbols);
  const double xi_t = compression * pulse.nyquist_period;
  return dirichlet_sq(doppler, n_symbols, xi_t) *
         std::norm(pulse_af(pulse, 0.0, doppler));
}

AfSlice af_slice(const PulseSpec& pulse, double compression, int n_symbols,
                 const Constellation& constellation, AfAxis axis,
                 std::vector<double> grid, double symbol_energy) {
  if (grid.empty()) throw std::invalid_argument("af_slice: empty grid");
  const double kurt = kurtosis(constellation);
  const double origin = expected_sq_af(pulse, compression, n_symbols, kurt,
                                       0.0, 0.0, symbol_energy);
  AfSlice slice;
  slice.axis = axis;
  slice.grid = std::move(grid);
  slice.values.reserve(slice.grid.size());
  slice.compression = compression;
  slice.n_symbols = n_symbols;
  slice.nyquist_period = pulse.nyquist_period;
  slice.roll_off = pulse.roll_off;
  slice.kurtosis = kurt;
  for (double g : slice.grid) {
    const double delay = axis == AfAxis::delay ? g : 0.0;
    const double doppler = axis == AfAxis::doppler ? g : 0.0;
    slice.values.push_back(expected_sq_af(pulse, compression, n_symbols, kurt,
                                          delay, doppler, symbol_energy) /
                           origin);
  }
  return slice;
}

}  // namespace ftnisac

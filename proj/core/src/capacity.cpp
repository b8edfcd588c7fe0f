#include "ftnisac/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftnisac/detail/linalg.hpp"
#include "ftnisac/detail/quadrature.hpp"
#include "ftnisac/isi.hpp"

namespace ftnisac {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_compression(double compression) {
  if (!(compression > 0.0 && compression <= 1.0)) {
    throw std::invalid_argument("capacity: compression must lie in (0, 1]");
  }
}

void check_snr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) {
    throw std::invalid_argument("capacity: snr must be finite and >= 0");
  }
}

void check_channel(const MultipathChannel& ch) {
  if (ch.paths.empty()) {
    throw std::invalid_argument("channel: needs at least one path");
  }
}

/// Per-(pulse, compression) evaluator for alias sums on the fundamental
/// frequency interval.
struct AliasEvaluator {
  const PulseSpec& pulse;
  double rate;   // 1/(xi T)
  double xi_t;   // xi T
  int n_max;     // exact alias truncation

  AliasEvaluator(const PulseSpec& p, double compression)
      : pulse(p),
        rate(1.0 / (compression * p.nyquist_period)),
        xi_t(compression * p.nyquist_period),
        n_max(static_cast<int>(std::ceil(bandwidth(p) * compression *
                                         p.nyquist_period)) +
              1) {}

  double folded(double f) const {
    double sum = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
      sum += spectrum_sq(pulse, f - n * rate);
    }
    return sum;
  }

  // Delay-phased alias sum S(f, tau) = sum_n |Hp(f - n/xiT)|^2
  // e^{j 2 pi n tau / xiT}.
  std::complex<double> phased(double f, double tau) const {
    std::complex<double> sum{};
    for (int n = -n_max; n <= n_max; ++n) {
      const double s = spectrum_sq(pulse, f - n * rate);
      if (s != 0.0) sum += std::polar(s, kTwoPi * n * tau / xi_t);
    }
    return sum;
  }

  std::complex<double> combined(const MultipathChannel& ch, double f) const {
    std::complex<double> acc{};
    for (const auto& p : ch.paths) {
      acc += p.gain * std::polar(1.0, kTwoPi * f * p.delay) *
             std::conj(phased(f, p.delay));
    }
    return acc;
  }

  void check_domain(double f) const {
    if (std::fabs(f) > 0.5 * rate * (1.0 + 1e-12)) {
      throw std::domain_error(
          "capacity: f outside the fundamental interval [-1/(2 xi T), "
          "1/(2 xi T)]");
    }
  }

  // Kinks of every alias copy inside [-rate/2, rate/2].
  std::vector<double> breakpoints() const {
    std::vector<double> knots;
    for (int n = -n_max; n <= n_max; ++n) {
      for (double b : spectrum_breakpoints(pulse)) {
        const double x = b + n * rate;
        if (std::fabs(x) <= 0.5 * rate) knots.push_back(x);
      }
    }
    return knots;
  }
};

// In-domain zeros of Re{g e^{j 2 pi f dtau}}: sign-change knots of the
// bound selectors.
void cross_term_zeros(std::complex<double> g, double dtau, double half_span,
                      std::vector<double>* knots) {
  if (std::fabs(dtau) < 1e-15 || std::abs(g) == 0.0) return;
  const double phi = std::arg(g);
  const double period = 1.0 / std::fabs(dtau);
  // cos(2 pi f dtau + phi) = 0  =>  f = (pi/2 + k pi - phi) / (2 pi dtau)
  const double base = (0.5 * std::numbers::pi - phi) / (kTwoPi * dtau);
  const double step = 0.5 * period;
  const double k_lo = std::floor((-half_span - base) / step) - 1;
  const double k_hi = std::ceil((half_span - base) / step) + 1;
  for (double k = k_lo; k <= k_hi; ++k) {
    const double f = base + k * step;
    if (std::fabs(f) <= half_span) knots->push_back(f);
  }
}
}  // namespace

MultipathChannel MultipathChannel::from_paths(std::vector<PathGain> paths) {
  if (paths.empty()) {
    throw std::invalid_argument("channel: needs at least one path");
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!(paths[i].delay >= 0.0)) {
      throw std::invalid_argument("channel: delays must be >= 0");
    }
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (std::fabs(paths[i].delay - paths[j].delay) < 1e-9) {
        throw std::invalid_argument(
            "channel: path delays must be resolvable (pairwise distinct)");
      }
    }
  }
  MultipathChannel ch;
  ch.paths = std::move(paths);
  return ch;
}

double dtft_g0(const PulseSpec& pulse, double compression, double f) {
  check_compression(compression);
  AliasEvaluator ev(pulse, compression);
  ev.check_domain(f);
  return ev.folded(f) / ev.xi_t;
}

double dtft_dll(const PulseSpec& pulse, double compression,
                std::complex<double> gain, double path_delay, double f) {
  check_compression(compression);
  AliasEvaluator ev(pulse, compression);
  ev.check_domain(f);
  return std::norm(gain) * std::norm(ev.phased(f, path_delay)) /
         (ev.xi_t * ev.xi_t);
}

double dtft_tll(const PulseSpec& pulse, double compression,
                std::complex<double> gain_a, double delay_a,
                std::complex<double> gain_b, double delay_b, double f) {
  check_compression(compression);
  AliasEvaluator ev(pulse, compression);
  ev.check_domain(f);
  const std::complex<double> cross =
      gain_a * std::conj(gain_b) *
      std::polar(1.0, kTwoPi * f * (delay_a - delay_b)) *
      ev.phased(f, delay_b) * std::conj(ev.phased(f, delay_a));
  return 2.0 * cross.real() / (ev.xi_t * ev.xi_t);
}

double upsilon(const PulseSpec& pulse, double compression,
               const MultipathChannel& channel, double f) {
  check_compression(compression);
  check_channel(channel);
  AliasEvaluator ev(pulse, compression);
  ev.check_domain(f);
  return std::norm(ev.combined(channel, f));
}

double spectral_efficiency(const PulseSpec& pulse, double compression,
                           const MultipathChannel& channel, double snr) {
  check_compression(compression);
  check_channel(channel);
  check_snr(snr);
  AliasEvaluator ev(pulse, compression);
  const double half = 0.5 * ev.rate;
  const auto knots = ev.breakpoints();
  const double integral = detail::integrate(
      [&](double f) {
        const double den = ev.folded(f);
        if (den == 0.0) return 0.0;
        const double num = std::norm(ev.combined(channel, f));
        return std::log2(1.0 + snr * num / den);
      },
      -half, half, knots, 1e-10);
  return integral / bandwidth(pulse);
}

SeBounds se_bounds(const PulseSpec& pulse, double compression,
                   const MultipathChannel& channel, double snr) {
  check_compression(compression);
  check_channel(channel);
  check_snr(snr);
  AliasEvaluator ev(pulse, compression);
  const double half = 0.5 * ev.rate;

  std::vector<double> knots = ev.breakpoints();
  const auto& paths = channel.paths;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      cross_term_zeros(paths[a].gain * std::conj(paths[b].gain),
                       paths[a].delay - paths[b].delay, half, &knots);
    }
  }

  double gain_sq = 0.0;
  for (const auto& p : paths) gain_sq += std::norm(p.gain);

  const auto envelope = [&](double f, bool upper) {
    const double fo =
        folded_spectrum_sq(pulse, compression, f, FoldedSpectrumKind::folded);
    const double tfo =
        folded_spectrum_sq(pulse, compression, f, FoldedSpectrumKind::twisted);
    double phi = gain_sq * (upper ? fo : tfo);
    for (std::size_t a = 0; a < paths.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        const std::complex<double> g =
            paths[a].gain * std::conj(paths[b].gain) *
            std::polar(1.0, kTwoPi * f * (paths[a].delay - paths[b].delay));
        const double c = g.real();
        // constructive alias extreme for the upper bound, destructive for
        // the lower, flipped when the cross term is negative
        const double sel = (c >= 0.0) == upper ? fo : tfo;
        phi += 2.0 * c * sel;
      }
    }
    return upper ? phi : std::max(phi, 0.0);
  };

  SeBounds out;
  out.rate_ub = detail::integrate(
                    [&](double f) {
                      return std::log2(1.0 + snr * envelope(f, true));
                    },
                    -half, half, knots, 1e-10) /
                bandwidth(pulse);
  out.rate_lb = detail::integrate(
                    [&](double f) {
                      return std::log2(1.0 + snr * envelope(f, false));
                    },
                    -half, half, knots, 1e-10) /
                bandwidth(pulse);
  return out;
}

double se_no_aliasing(const PulseSpec& pulse, double compression,
                      const MultipathChannel& channel, double snr) {
  check_compression(compression);
  check_channel(channel);
  check_snr(snr);
  if (compression > saturation_threshold(pulse) * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "se_no_aliasing: compression above the saturation threshold; the "
        "alias-free form does not apply");
  }
  const double half_w = 0.5 * bandwidth(pulse);
  const auto knots = spectrum_breakpoints(pulse);
  const double integral = detail::integrate(
      [&](double f) {
        std::complex<double> h{};
        for (const auto& p : channel.paths) {
          h += p.gain * std::polar(1.0, kTwoPi * f * p.delay);
        }
        return std::log2(1.0 + snr * std::norm(h) * spectrum_sq(pulse, f));
      },
      -half_w, half_w, knots, 1e-10);
  return integral / bandwidth(pulse);
}

double mutual_info_matrix(const PulseSpec& pulse, double compression,
                          const MultipathChannel& channel, double snr,
                          int n_symbols, bool cyclic) {
  check_compression(compression);
  check_channel(channel);
  check_snr(snr);
  if (n_symbols < 2) {
    throw std::invalid_argument("mutual_info_matrix: n_symbols must be >= 2");
  }
  const std::size_t n = static_cast<std::size_t>(n_symbols);
  const double xi_t = compression * pulse.nyquist_period;
  const double es_over_n0 = snr * xi_t;  // same power spectral density rule

  // Coefficient rows. The circulant wrap folds every tap k = j + r*n; rows
  // extend far enough that the discarded tail of the ~1/k^3 coefficient
  // decay is below 1e-6 in summed magnitude.
  const int k_max =
      cyclic ? n_symbols * std::max(3, static_cast<int>(std::ceil(
                               2048.0 / n_symbols))) -
                   1
             : n_symbols - 1;

  const auto wrap = [&](const std::vector<double>& row) {
    std::vector<double> first(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      int k = static_cast<int>(j);
      while (k - n_symbols >= -k_max) k -= n_symbols;
      for (; k <= k_max; k += n_symbols) first[j] += row[k + k_max];
    }
    return first;
  };

  // Combined complex gain matrix A = sum_l h_l G_l (lower+upper: full).
  std::vector<std::complex<double>> a(n * n, std::complex<double>{});
  for (const auto& p : channel.paths) {
    const auto row = isi_coefficient_row(pulse, compression, p.delay, k_max);
    if (cyclic) {
      const auto first = wrap(row);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          const std::size_t idx =
              (c + n - r) % n;  // circulant: depends on (c - r) mod n
          a[r * n + c] += p.gain * first[idx];
        }
      }
    } else {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          a[r * n + c] +=
              p.gain * row[static_cast<int>(c) - static_cast<int>(r) + k_max];
        }
      }
    }
  }

  // Noise-whitening Gram matrix (delay zero).
  const auto g0_row = isi_coefficient_row(pulse, compression, 0.0, k_max);
  std::vector<double> g0_first;
  if (cyclic) g0_first = wrap(g0_row);

  const auto g0_at = [&](std::size_t r, std::size_t c) {
    if (cyclic) return g0_first[(c + n - r) % n];
    return g0_row[static_cast<int>(c) - static_cast<int>(r) + k_max];
  };

  // B = G0 + (Es/N0) A A^H, lower triangle only.
  std::vector<std::complex<double>> b(n * n, std::complex<double>{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::complex<double> dot{};
      const std::complex<double>* ri = &a[i * n];
      const std::complex<double>* rj = &a[j * n];
      for (std::size_t k = 0; k < n; ++k) dot += ri[k] * std::conj(rj[k]);
      b[i * n + j] = g0_at(i, j) + es_over_n0 * dot;
    }
  }

  std::vector<std::complex<double>> g0(n * n, std::complex<double>{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) g0[i * n + j] = g0_at(i, j);
  }

  const double log_det_b = detail::cholesky_log_det_inplace(b, n);
  const double log_det_g0 = detail::cholesky_log_det_inplace(g0, n);
  const double bits = (log_det_b - log_det_g0) / std::numbers::ln2;
  return bits / (n_symbols * xi_t * bandwidth(pulse));
}

MultipathChannel draw_channel(const ChannelModel& model, detail::Rng& rng) {
  if (model.n_paths < 1) {
    throw std::invalid_argument("channel model: n_paths must be >= 1");
  }
  if (model.n_paths > 1 && !(model.max_delay > 0.0)) {
    throw std::invalid_argument(
        "channel model: multiple paths need max_delay > 0 for resolvable "
        "delays");
  }
  MultipathChannel ch;
  ch.paths.resize(model.n_paths);
  const double var = 1.0 / model.n_paths;  // uniform power delay profile
  for (auto& p : ch.paths) p.gain = rng.circular_gaussian(var);
  for (int i = 0; i < model.n_paths; ++i) {
    bool ok = false;
    while (!ok) {
      ch.paths[i].delay = rng.uniform01() * model.max_delay;
      ok = true;
      for (int j = 0; j < i; ++j) {
        if (std::fabs(ch.paths[i].delay - ch.paths[j].delay) < 1e-9) {
          ok = false;
          break;
        }
      }
    }
  }
  return ch;
}

ErgodicSe ergodic_se_bounds(const PulseSpec& pulse, double compression,
                            const ChannelModel& model, double snr, int trials,
                            std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("ergodic_se: trials must be >= 1");
  }
  ErgodicSe acc;
  for (int t = 0; t < trials; ++t) {
    auto rng = detail::Rng::stream(seed, static_cast<std::uint64_t>(t));
    const auto ch = draw_channel(model, rng);
    acc.rate += spectral_efficiency(pulse, compression, ch, snr);
    const auto b = se_bounds(pulse, compression, ch, snr);
    acc.rate_ub += b.rate_ub;
    acc.rate_lb += b.rate_lb;
  }
  acc.rate /= trials;
  acc.rate_ub /= trials;
  acc.rate_lb /= trials;
  return acc;
}

double ergodic_se(const PulseSpec& pulse, double compression,
                  const ChannelModel& model, double snr, int trials,
                  std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("ergodic_se: trials must be >= 1");
  }
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto rng = detail::Rng::stream(seed, static_cast<std::uint64_t>(t));
    const auto ch = draw_channel(model, rng);
    acc += spectral_efficiency(pulse, compression, ch, snr);
  }
  return acc / trials;
}

}  // namespace ftnisac

#include "ftnisac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftnisac/detail/fft.hpp"

namespace ftnisac {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

double resolve_symbol_energy(const McConfig& cfg) {
  if (cfg.symbol_energy > 0.0) return cfg.symbol_energy;
  return cfg.compression * cfg.pulse.nyquist_period;
}

// Lag products c_m = sum_n x_n conj(x_{n+m}), m = -(N-1) .. N-1
// (index m + N - 1).
std::vector<cplx> lag_products(const std::vector<cplx>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> c(2 * n - 1, cplx{});
  for (int m = -(n - 1); m <= n - 1; ++m) {
    cplx acc{};
    const int lo = std::max(1, 1 - m);
    const int hi = std::min(n, n - m);
    for (int i = lo; i <= hi; ++i) {
      acc += x[i - 1] * std::conj(x[i + m - 1]);
    }
    c[m + n - 1] = acc;
  }
  return c;
}

// Direct evaluation of the signal AF from a precomputed pulse-AF row
// (row[m + N - 1] = AF_p(m xi T + delay, doppler)); O(N^2).
cplx af_from_row(const std::vector<cplx>& x, const std::vector<cplx>& row,
                 cplx phase_step, double symbol_energy) {
  const int n = static_cast<int>(x.size());
  cplx acc{};
  cplx ph = phase_step;
  for (int np = 1; np <= n; ++np) {
    cplx inner{};
    for (int m = 1; m <= n; ++m) {
      inner += x[m - 1] * row[(np - m) + n - 1];
    }
    acc += std::conj(x[np - 1]) * ph * inner;
    ph *= phase_step;
  }
  return symbol_energy * acc;
}

// Batched AF evaluation: one FFT of the symbol vector per trial, one
// pointwise product + inverse FFT per Doppler point against the
// pre-transformed pulse-AF row.
struct AfBatch {
  detail::Fft fft;
  int n;
  double symbol_energy;

  AfBatch(int n_symbols, double symbol_energy_)
      : fft(detail::next_pow2(static_cast<std::size_t>(3 * n_symbols))),
        n(n_symbols),
        symbol_energy(symbol_energy_) {}

  std::vector<cplx> transform_row(const std::vector<cplx>& row) const {
    std::vector<cplx> padded(fft.size(), cplx{});
    std::copy(row.begin(), row.end(), padded.begin());
    fft.forward(padded.data());
    return padded;
  }

  std::vector<cplx> transform_symbols(const std::vector<cplx>& x) const {
    std::vector<cplx> padded(fft.size(), cplx{});
    std::copy(x.begin(), x.end(), padded.begin());
    fft.forward(padded.data());
    return padded;
  }

  cplx eval(const std::vector<cplx>& x, const std::vector<cplx>& x_hat,
            const std::vector<cplx>& row_hat, cplx phase_step,
            std::vector<cplx>& work) const {
    for (std::size_t i = 0; i < fft.size(); ++i) {
      work[i] = x_hat[i] * row_hat[i];
    }
    fft.inverse(work.data());
    cplx acc{};
    cplx ph = phase_step;
    for (int np = 1; np <= n; ++np) {
      acc += std::conj(x[np - 1]) * ph * work[np + n - 2];
      ph *= phase_step;
    }
    return symbol_energy * acc;
  }
};

void check_constellation_sampleable(const Constellation& c) {
  if (c.analytic || c.points.empty()) {
    throw std::invalid_argument(
        "experiments: constellation is analytic-only and cannot be sampled");
  }
}

std::vector<std::vector<cplx>> all_sequences(const Constellation& c, int n) {
  const std::size_t p = c.points.size();
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(p);
  if (total > (1u << 20)) {
    throw std::invalid_argument(
        "experiments: exhaustive enumeration too large");
  }
  std::vector<std::vector<cplx>> seqs;
  seqs.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digits(n, 0);
  while (true) {
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = c.points[digits[i]];
    seqs.push_back(std::move(x));
    int pos = 0;
    while (pos < n && ++digits[pos] == p) digits[pos++] = 0;
    if (pos == n) break;
  }
  return seqs;
}
}  // namespace

std::vector<cplx> draw_symbols(const Constellation& c, int n,
                               detail::Rng& rng) {
  check_constellation_sampleable(c);
  if (n < 1) throw std::invalid_argument("draw_symbols: n must be >= 1");
  std::vector<cplx> x(n);
  const std::uint64_t p = c.points.size();
  for (auto& v : x) v = c.points[rng.uniform_below(p)];
  return x;
}

AfSlice mc_af_slice(const McConfig& cfg, AfAxis axis,
                    std::vector<double> grid) {
  if (grid.empty()) throw std::invalid_argument("mc_af_slice: empty grid");
  check_constellation_sampleable(cfg.constellation);
  if (!cfg.exhaustive && cfg.trials < 1) {
    throw std::invalid_argument("mc_af_slice: trials must be >= 1");
  }
  const int n = cfg.n_symbols;
  if (n < 1) throw std::invalid_argument("mc_af_slice: n_symbols >= 1");
  const double xi_t = cfg.compression * cfg.pulse.nyquist_period;
  const double es = resolve_symbol_energy(cfg);
  const std::size_t g = grid.size();

  // Pulse AF tables shared by every trial.
  const auto row00 = pulse_af_row(cfg.pulse, 0.0, xi_t, n - 1, 0.0);
  std::vector<std::vector<cplx>> rows(g);
  std::vector<cplx> phase_steps(g);
  for (std::size_t i = 0; i < g; ++i) {
    const double delay = axis == AfAxis::delay ? grid[i] : 0.0;
    const double doppler = axis == AfAxis::doppler ? grid[i] : 0.0;
    rows[i] = pulse_af_row(cfg.pulse, doppler, xi_t, n - 1, delay);
    phase_steps[i] = std::polar(1.0, -kTwoPi * doppler * xi_t);
  }

  std::vector<double> sums(g, 0.0);
  double weight = 0.0;

  const auto accumulate_direct = [&](const std::vector<cplx>& x) {
    const double den = std::norm(af_from_row(x, row00, cplx{1.0, 0.0}, es));
    for (std::size_t i = 0; i < g; ++i) {
      sums[i] += std::norm(af_from_row(x, rows[i], phase_steps[i], es)) / den;
    }
    weight += 1.0;
  };

  if (cfg.exhaustive) {
    for (const auto& x : all_sequences(cfg.constellation, n)) {
      accumulate_direct(x);
    }
  } else if (axis == AfAxis::delay) {
    // Zero Doppler: the AF is a lag-weighted sum, so the O(N^2) lag products
    // are computed once per trial and each grid point costs O(N).
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::Rng::stream(cfg.seed, static_cast<std::uint64_t>(t));
      const auto x = draw_symbols(cfg.constellation, n, rng);
      const auto lags = lag_products(x);
      cplx af00{};
      for (int m = -(n - 1); m <= n - 1; ++m) {
        af00 += lags[m + n - 1] * row00[m + n - 1];
      }
      const double den = std::norm(es * af00);
      for (std::size_t i = 0; i < g; ++i) {
        cplx af{};
        const auto& row = rows[i];
        for (int m = -(n - 1); m <= n - 1; ++m) {
          af += lags[m + n - 1] * row[m + n - 1];
        }
        sums[i] += std::norm(es * af) / den;
      }
      weight += 1.0;
    }
  } else {
    AfBatch batch(n, es);
    std::vector<std::vector<cplx>> row_hats(g);
    for (std::size_t i = 0; i < g; ++i) {
      row_hats[i] = batch.transform_row(rows[i]);
    }
    std::vector<cplx> work(batch.fft.size());
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::Rng::stream(cfg.seed, static_cast<std::uint64_t>(t));
      const auto x = draw_symbols(cfg.constellation, n, rng);
      const auto lags = lag_products(x);
      cplx af00{};
      for (int m = -(n - 1); m <= n - 1; ++m) {
        af00 += lags[m + n - 1] * row00[m + n - 1];
      }
      const double den = std::norm(es * af00);
      const auto x_hat = batch.transform_symbols(x);
      for (std::size_t i = 0; i < g; ++i) {
        const cplx af = batch.eval(x, x_hat, row_hats[i], phase_steps[i], work);
        sums[i] += std::norm(af) / den;
      }
      weight += 1.0;
    }
  }

  AfSlice slice;
  slice.axis = axis;
  slice.grid = std::move(grid);
  slice.values.resize(g);
  for (std::size_t i = 0; i < g; ++i) slice.values[i] = sums[i] / weight;
  slice.compression = cfg.compression;
  slice.n_symbols = n;
  slice.nyquist_period = cfg.pulse.nyquist_period;
  slice.roll_off = cfg.pulse.roll_off;
  slice.kurtosis = kurtosis(cfg.constellation);
  return slice;
}

std::vector<double> doppler_mse(const DopplerSceneConfig& scene,
                                const PulseSpec& pulse, double compression,
                                const Constellation& constellation) {
  check_constellation_sampleable(constellation);
  if (scene.trials < 1) {
    throw std::invalid_argument("doppler_mse: trials must be >= 1");
  }
  if (scene.snr_db_grid.empty()) {
    throw std::invalid_argument("doppler_mse: empty SNR grid");
  }
  if (!(scene.search_hi > scene.search_lo)) {
    throw std::invalid_argument("doppler_mse: empty search window");
  }
  for (const auto& tg : scene.targets) {
    if (!(tg.reflectivity > 0.0)) {
      throw std::invalid_argument("doppler_mse: reflectivity must be > 0");
    }
    if (tg.doppler < scene.search_lo || tg.doppler > scene.search_hi) {
      throw std::invalid_argument(
          "doppler_mse: target Doppler outside the search window");
    }
  }

  const int n = std::max(
      1, static_cast<int>(std::lround(scene.n_nyquist / compression)));
  const double xi_t = compression * pulse.nyquist_period;
  const double es = xi_t;  // equal-PSD rule with unit transmit power
  const double sqrt_es = std::sqrt(es);
  const double step = 1.0 / (8.0 * n * xi_t);
  const int g = static_cast<int>(
                    std::floor((scene.search_hi - scene.search_lo) / step +
                               1e-9)) +
                1;
  std::vector<double> nu(g);
  for (int i = 0; i < g; ++i) nu[i] = scene.search_lo + i * step;

  // Weak target = lowest reflectivity; its Doppler is the estimation truth.
  int weak = -1;
  const std::size_t k_targets = scene.targets.size();
  for (std::size_t k = 0; k < k_targets; ++k) {
    if (weak < 0 ||
        scene.targets[k].reflectivity < scene.targets[weak].reflectivity) {
      weak = static_cast<int>(k);
    }
  }
  const double truth = weak >= 0 ? scene.targets[weak].doppler : 0.0;
  // Four main-lobe widths: the Dirichlet sidelobe envelope at the excision
  // boundary is then ~1/(4 pi) of the main peak, safely below a 15%
  // secondary target. Two widths would leave the boundary envelope at
  // ~1/(2 pi) = 0.159, racing the weak peak.
  const double excise = 4.0 / (n * xi_t);

  // Noise is injected per received sample with variance N0 = P / snr and
  // unit transmit power, so the per-symbol SNR after the length-N matched
  // filter equals Es/N0. One unit-variance draw per sample per trial,
  // scaled per SNR point (common random numbers across the SNR grid).
  const std::size_t n_snr = scene.snr_db_grid.size();
  std::vector<double> noise_sigma(n_snr);
  for (std::size_t s = 0; s < n_snr; ++s) {
    const double snr_lin = std::pow(10.0, scene.snr_db_grid[s] / 10.0);
    noise_sigma[s] = std::sqrt(1.0 / snr_lin);
  }

  // Phase recurrence steps for each (target, search point) Doppler offset.
  std::vector<std::vector<cplx>> target_steps(k_targets,
                                              std::vector<cplx>(g));
  for (std::size_t k = 0; k < k_targets; ++k) {
    for (int i = 0; i < g; ++i) {
      target_steps[k][i] =
          std::polar(1.0, kTwoPi * (scene.targets[k].doppler - nu[i]) * xi_t);
    }
  }
  std::vector<cplx> search_steps(g);
  for (int i = 0; i < g; ++i) {
    search_steps[i] = std::polar(1.0, -kTwoPi * nu[i] * xi_t);
  }

  std::vector<double> mse(n_snr, 0.0);
  std::vector<cplx> signal(g);
  std::vector<cplx> noise_mf(g);
  std::vector<double> power(g);
  std::vector<double> weights(n);
  std::vector<cplx> eta(n);

  for (int t = 0; t < scene.trials; ++t) {
    auto sym_rng =
        detail::Rng::stream(scene.seed, 2 * static_cast<std::uint64_t>(t));
    const auto x = draw_symbols(constellation, n, sym_rng);
    auto noise_rng = detail::Rng::stream(
        scene.seed, 2 * static_cast<std::uint64_t>(t) + 1);
    for (int i = 0; i < n; ++i) {
      weights[i] = std::norm(x[i]);
      eta[i] = noise_rng.circular_gaussian(1.0) * std::conj(x[i]);
    }

    // Matched-filter output over the search grid: the echo is the sum of
    // Doppler-shifted copies of the transmit sequence, so the response to
    // target k at search point nu_i is a |x|^2-weighted geometric sum at
    // offset (doppler_k - nu_i).
    std::fill(signal.begin(), signal.end(), cplx{});
    for (std::size_t k = 0; k < k_targets; ++k) {
      const double a = scene.targets[k].reflectivity * sqrt_es;
      for (int i = 0; i < g; ++i) {
        const cplx w = target_steps[k][i];
        cplx cur = w;
        cplx acc{};
        for (int m = 0; m < n; ++m) {
          acc += weights[m] * cur;
          cur *= w;
        }
        signal[i] += a * acc;
      }
    }
    for (int i = 0; i < g; ++i) {
      const cplx w = search_steps[i];
      cplx cur = w;
      cplx acc{};
      for (int m = 0; m < n; ++m) {
        acc += eta[m] * cur;
        cur *= w;
      }
      noise_mf[i] = acc;
    }

    for (std::size_t s = 0; s < n_snr; ++s) {
      const double sigma = noise_sigma[s];
      for (int i = 0; i < g; ++i) {
        power[i] = std::norm(signal[i] + sigma * noise_mf[i]);
      }
      // quadratic vertex refinement of a grid peak; keeps the estimate
      // continuous in the noise so the MSE has no quantization floor
      const auto refine = [&](int i) {
        if (i <= 0 || i >= g - 1) return nu[i];
        const double pm = power[i - 1];
        const double p0 = power[i];
        const double pp = power[i + 1];
        const double den = pm - 2.0 * p0 + pp;
        if (!(den < 0.0)) return nu[i];
        double delta = 0.5 * (pm - pp) / den;
        delta = std::clamp(delta, -0.5, 0.5);
        return nu[i] + delta * step;
      };
      int first = 0;
      for (int i = 1; i < g; ++i) {
        if (power[i] > power[first]) first = i;
      }
      double estimate = refine(first);
      if (k_targets >= 2) {
        int second = -1;
        for (int i = 0; i < g; ++i) {
          if (std::fabs(nu[i] - nu[first]) <= excise) continue;
          if (second < 0 || power[i] > power[second]) second = i;
        }
        if (second >= 0) estimate = refine(second);
      }
      const double err = estimate - truth;
      mse[s] += err * err;
    }
  }
  for (auto& v : mse) v /= scene.trials;
  return mse;
}

}  // namespace ftnisac

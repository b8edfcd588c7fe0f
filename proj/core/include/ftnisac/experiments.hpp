#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ftnisac/ambiguity.hpp"
#include "ftnisac/detail/rng.hpp"
#include "ftnisac/pulse.hpp"

namespace ftnisac {

/// Configuration of a seeded Monte Carlo ambiguity run. Identical config and
/// seed give byte-identical output: per-trial generator streams are derived
/// by counter splitting and reduced in trial order.
struct McConfig {
  int trials = 10000;
  std::uint64_t seed = 1;
  double compression = 1.0;
  int n_symbols = 100;
  PulseSpec pulse = PulseSpec::rrc(0.3);
  Constellation constellation = Constellation::qpsk();
  double symbol_energy = 0.0;  // <= 0 selects xi*T (equal-PSD rule, P = 1)
  bool exhaustive = false;     // enumerate every sequence instead of sampling
};

/// I.i.d. uniform draws from the constellation alphabet. Rejects the
/// analytic Gaussian entry, which cannot be sampled.
std::vector<std::complex<double>> draw_symbols(const Constellation& c, int n,
                                               detail::Rng& rng);

/// Empirical counterpart of af_slice: per grid point the trial average of
/// |signal_af(x, .)|^2 / |signal_af(x, 0, 0)|^2 over random symbol vectors.
AfSlice mc_af_slice(const McConfig& cfg, AfAxis axis,
                    std::vector<double> grid);

struct DopplerTarget {
  double reflectivity = 1.0;  // amplitude scale, > 0
  double doppler = 0.0;       // Hz
};

/// Two-target Doppler estimation scene. The echo is synthesized at the
/// matched-filter output level: the response to a target is the signal
/// ambiguity function of the realized transmit sequence shifted to the
/// target Doppler, plus output noise calibrated so the per-symbol
/// post-matched-filter SNR equals Es/N0. Noise draws are shared across the
/// SNR grid (common random numbers), so MSE curves are deterministic and
/// smooth in SNR for a fixed seed.
struct DopplerSceneConfig {
  std::vector<DopplerTarget> targets;
  std::vector<double> snr_db_grid;
  int trials = 500;
  std::uint64_t seed = 1;
  int n_nyquist = 100;      // fairness reference; N = round(n_nyquist / xi)
  double search_lo = -0.7;  // Hz, matched-filter search window
  double search_hi = 0.7;   // Hz
};

/// Per-SNR mean squared error of the weak (lowest-reflectivity) target's
/// Doppler estimate. Estimation is a grid peak search with step
/// 1/(8 N xi T); the second peak is taken after excising two main-lobe
/// widths, 2/(N xi T), around the first. With an empty target list the
/// error is measured against the window centre (pure-noise baseline).
std::vector<double> doppler_mse(const DopplerSceneConfig& scene,
                                const PulseSpec& pulse, double compression,
                                const Constellation& constellation);

}  // namespace ftnisac

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ftnisac/detail/rng.hpp"
#include "ftnisac/pulse.hpp"

namespace ftnisac {

struct PathGain {
  std::complex<double> gain;
  double delay = 0.0;  // seconds
};

/// Time-invariant multipath channel with resolvable (pairwise distinct,
/// non-negative) path delays.
struct MultipathChannel {
  std::vector<PathGain> paths;

  /// Validates delay distinctness/non-negativity; throws
  /// std::invalid_argument.
  static MultipathChannel from_paths(std::vector<PathGain> paths);
};

struct SeResult {
  double snr_db = 0.0;
  double rate = 0.0;     // bits/s/Hz
  double rate_ub = 0.0;  // bits/s/Hz
  double rate_lb = 0.0;  // bits/s/Hz
};

/// DTFT of the matched-filter autocorrelation coefficients at frequency f,
/// equal to the folded spectrum scaled by the symbol rate. Strictly positive
/// on the fundamental interval |f| <= 1/(2 xi T); throws std::domain_error
/// outside it.
double dtft_g0(const PulseSpec& pulse, double compression, double f);

/// DTFT of the per-path Gram coefficients: |h|^2/(xi T)^2 times the squared
/// modulus of the delay-phased alias sum. Real and nonnegative.
double dtft_dll(const PulseSpec& pulse, double compression,
                std::complex<double> gain, double path_delay, double f);

/// DTFT of the symmetrized cross-path Gram coefficients for two distinct
/// paths. Real, but can take either sign.
double dtft_tll(const PulseSpec& pulse, double compression,
                std::complex<double> gain_a, double delay_a,
                std::complex<double> gain_b, double delay_b, double f);

/// Channel-combined numerator of the spectral-efficiency integrand:
/// |sum_l h_l e^{j 2 pi f tau_l} conj(S_l)|^2 with S_l the delay-phased alias
/// sum. Equals (xi T)^2 [sum_l D_ll + sum_{pairs} T_ll'].
double upsilon(const PulseSpec& pulse, double compression,
               const MultipathChannel& channel, double f);

/// Spectral efficiency in bits/s/Hz: frequency integral of
/// log2(1 + snr * upsilon / folded) over one symbol-rate interval,
/// normalized by the pulse bandwidth W. `snr` is the linear transmit power
/// to noise density ratio P/N0.
double spectral_efficiency(const PulseSpec& pulse, double compression,
                           const MultipathChannel& channel, double snr);

struct SeBounds {
  double rate_ub = 0.0;
  double rate_lb = 0.0;
};

/// Upper/lower spectral-efficiency bounds from the folded / twisted-folded
/// spectrum envelopes with per-pair constructive/destructive selection. The
/// bounds collapse onto the exact rate when the symbol rate is at least the
/// pulse bandwidth.
SeBounds se_bounds(const PulseSpec& pulse, double compression,
                   const MultipathChannel& channel, double snr);

/// Closed form valid when compression <= saturation threshold (no spectral
/// aliasing): integral over the pulse band of
/// log2(1 + snr |sum_l h_l e^{j2 pi f tau_l}|^2 |Hp(f)|^2) / W.
/// Independent of the compression factor within its precondition; rejects
/// compression above the threshold.
double se_no_aliasing(const PulseSpec& pulse, double compression,
                      const MultipathChannel& channel, double snr);

/// Finite-size matrix route to the same quantity: normalized log-det mutual
/// information of the effective Toeplitz channel (or its circulant wrap when
/// `cyclic`, the cyclic-prefix model). Evaluated as a log-det difference
/// through Cholesky factorizations, never by forming an inverse. Throws
/// ConditioningError when the Gram matrix is numerically singular.
double mutual_info_matrix(const PulseSpec& pulse, double compression,
                          const MultipathChannel& channel, double snr,
                          int n_symbols, bool cyclic);

/// Random channel ensemble: uniform power delay profile (i.i.d. circular
/// complex Gaussian gains with variance 1/L) and i.i.d. uniform delays on
/// [0, max_delay], redrawn on collisions closer than 1e-9 s.
struct ChannelModel {
  int n_paths = 1;
  double max_delay = 0.0;  // seconds
};

MultipathChannel draw_channel(const ChannelModel& model, detail::Rng& rng);

struct ErgodicSe {
  double rate = 0.0;
  double rate_ub = 0.0;
  double rate_lb = 0.0;
};

/// Sample mean of the spectral efficiency (and its bounds) over `trials`
/// random channels. Deterministic for a given seed: per-trial generator
/// streams are derived by counter splitting and reduced in trial order.
ErgodicSe ergodic_se_bounds(const PulseSpec& pulse, double compression,
                            const ChannelModel& model, double snr, int trials,
                            std::uint64_t seed);

/// Mean rate only.
double ergodic_se(const PulseSpec& pulse, double compression,
                  const ChannelModel& model, double snr, int trials,
                  std::uint64_t seed);

}  // namespace ftnisac

#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ftnisac/pulse.hpp"

namespace ftnisac {

/// Finite complex modulation alphabet with unit power and rotational
/// symmetry (zero mean and zero second pseudo-moment). BPSK-style alphabets
/// violate the pseudo-moment condition and are rejected. The Gaussian entry
/// is analytic only: it carries kurtosis 2 for closed-form evaluation and
/// cannot be sampled.
struct Constellation {
  std::string name;
  std::vector<std::complex<double>> points;
  bool analytic = false;

  static Constellation qpsk();
  static Constellation psk8();
  static Constellation qam16();
  static Constellation qam64();
  static Constellation gaussian();

  /// Validates the moment conditions (unit power, zero mean, zero second
  /// pseudo-moment, each within 1e-12) and throws std::invalid_argument on
  /// violation.
  static Constellation from_points(std::string name,
                                   std::vector<std::complex<double>> points);
};

/// Fourth absolute moment E|a|^4 of a unit-power alphabet (2 for Gaussian,
/// 1 for any PSK).
double kurtosis(const Constellation& c);

/// Ambiguity function of the shaping pulse, evaluated in the frequency
/// domain over the exact spectral overlap band. Equals 1 at the origin and
/// is exactly zero whenever |doppler| >= W (disjoint supports).
std::complex<double> pulse_af(const PulseSpec& pulse, double delay,
                              double doppler);

/// Batched pulse AF samples AF_p(m*step + shift, doppler) for
/// m = -m_max .. m_max (index m + m_max). Shares quadrature nodes across m.
std::vector<std::complex<double>> pulse_af_row(const PulseSpec& pulse,
                                               double doppler, double step,
                                               int m_max, double shift);

/// Expected squared ambiguity function of the modulated signal at one
/// (delay, doppler) offset, for i.i.d. unit-power symbols with the given
/// kurtosis. Assembled from the Dirichlet mean term, the kurtosis excess
/// term, and the (N-|m|)-weighted pulse-AF sum; always nonnegative.
double expected_sq_af(const PulseSpec& pulse, double compression,
                      int n_symbols, double kurt, double delay, double doppler,
                      double symbol_energy);

/// Ambiguity function of one realized symbol vector (exact double-sum
/// collapsed over symbol-index differences). Used by oracles and the
/// Monte Carlo harness.
std::complex<double> signal_af(std::span<const std::complex<double>> symbols,
                               const PulseSpec& pulse, double compression,
                               double delay, double doppler,
                               double symbol_energy);

/// Squared-mean / variance split of the expected squared AF. The two parts
/// sum to expected_sq_af exactly (same term grouping).
struct IcebergParts {
  double mean_sq = 0.0;
  double variance = 0.0;
};
IcebergParts iceberg_decomposition(const PulseSpec& pulse, double compression,
                                   int n_symbols, double kurt, double delay,
                                   double doppler, double symbol_energy);

/// Accumulated ISI response sum_m (N-|m|) |AF_p(m xi T - delay, 0)|^2: the
/// delay-axis sidelobe pedestal.
double accumulated_isi(const PulseSpec& pulse, double compression,
                       int n_symbols, double delay);

/// Squared Dirichlet kernel sin^2(pi N df s) / sin^2(pi df s); N^2 at the
/// origin and periodic with period 1/s.
double dirichlet_sq(double freq_offset, int n_symbols, double symbol_period);

/// Doppler-shifted pedestal sum_m (N-|m|) |AF_p(m xi T, doppler)|^2.
double doppler_accumulated_isi(const PulseSpec& pulse, double compression,
                               int n_symbols, double doppler);

/// Squared Dirichlet kernel times |AF_p(0, doppler)|^2: the periodic Doppler
/// peaks that a symbol rate above the pulse bandwidth suppresses to exact
/// zero.
double periodic_doppler_variation(const PulseSpec& pulse, double compression,
                                  int n_symbols, double doppler);

enum class AfAxis { delay, doppler };

/// A sampled slice of the expected normalized squared AF along one axis,
/// with the generating configuration echoed for provenance.
struct AfSlice {
  AfAxis axis = AfAxis::delay;
  std::vector<double> grid;    // seconds (delay) or Hz (doppler)
  std::vector<double> values;  // normalized, 1 at the origin
  double compression = 1.0;
  int n_symbols = 0;
  double nyquist_period = 1.0;
  double roll_off = 0.0;
  double kurtosis = 1.0;
};

/// Closed-form slice: expected_sq_af over the grid normalized by its value
/// at the origin. The delay axis fixes doppler = 0 and vice versa. Values
/// are invariant to symbol_energy.
AfSlice af_slice(const PulseSpec& pulse, double compression, int n_symbols,
                 const Constellation& constellation, AfAxis axis,
                 std::vector<double> grid, double symbol_energy);

}  // namespace ftnisac

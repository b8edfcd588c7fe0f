#pragma once

#include <vector>

namespace ftnisac {

/// Shaping pulse families. Both are band-limited with unit energy:
/// the root-raised-cosine pulse occupies the two-sided band (1+beta)/T,
/// the ideal sinc pulse occupies 1/T.
enum class PulseFamily { rrc, sinc };

/// A band-limited, energy-normalized shaping pulse described by its energy
/// spectrum |Hp(f)|^2. Everything downstream (ISI coefficients, spectral
/// efficiency, ambiguity functions) is computed from this spectrum by
/// frequency-domain quadrature; the compact support makes every alias sum
/// and integral truncation exact.
struct PulseSpec {
  PulseFamily family = PulseFamily::rrc;
  double roll_off = 0.0;        // beta in [0, 1]; fixed 0 for sinc
  double nyquist_period = 1.0;  // T > 0, seconds

  static PulseSpec rrc(double roll_off, double nyquist_period = 1.0);
  static PulseSpec sinc(double nyquist_period = 1.0);
};

enum class FoldedSpectrumKind { folded, twisted };

/// Two-sided bandwidth W: (1+beta)/T for RRC, 1/T for sinc.
double bandwidth(const PulseSpec& pulse);

/// Largest compression factor with no spectral aliasing: 1/(W*T).
double saturation_threshold(const PulseSpec& pulse);

/// Energy spectrum |Hp(f)|^2. Exactly zero outside [-W/2, W/2] (hard zero,
/// not a small float), flat value T in the passband, raised-cosine taper in
/// the roll-off band.
double spectrum_sq(const PulseSpec& pulse, double f);

/// Amplitude spectrum Hp(f) >= 0 (the pulse is real and even, so Hp is real).
double spectrum_amp(const PulseSpec& pulse, double f);

/// Folded spectrum sum_n |Hp(f - n/(xi*T))|^2, or the twisted variant
/// |Hp(f)|^2 - sum_{n!=0} |Hp(f - n/(xi*T))|^2, on [-1/(2 xi T), 1/(2 xi T)]
/// and zero outside. The alias sum truncates exactly at |n| <= ceil(W xi T)+1
/// thanks to the compact support. The twisted value can be negative once
/// aliases overlap. Rejects compression outside (0, 1].
double folded_spectrum_sq(const PulseSpec& pulse, double compression, double f,
                          FoldedSpectrumKind kind);

/// Abscissae in [-W/2, W/2] where |Hp|^2 has a derivative jump
/// (passband/roll-off/band-edge knots). Quadrature panels split here.
std::vector<double> spectrum_breakpoints(const PulseSpec& pulse);

/// Energy check: integral of |Hp|^2 over the support, by this module's own
/// quadrature. Equals 1 to quadrature accuracy for valid pulses.
double spectrum_energy(const PulseSpec& pulse);

}  // namespace ftnisac

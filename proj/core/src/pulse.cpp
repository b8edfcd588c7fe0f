#include "ftnisac/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftnisac/detail/quadrature.hpp"

namespace ftnisac {

namespace {
constexpr double kPi = std::numbers::pi;

void validate(const PulseSpec& p) {
  if (!(p.nyquist_period > 0.0)) {
    throw std::invalid_argument("pulse: nyquist_period must be positive");
  }
  if (p.family == PulseFamily::rrc &&
      !(p.roll_off >= 0.0 && p.roll_off <= 1.0)) {
    throw std::invalid_argument("pulse: roll_off must lie in [0, 1]");
  }
}
}  // namespace

PulseSpec PulseSpec::rrc(double roll_off, double nyquist_period) {
  PulseSpec p{PulseFamily::rrc, roll_off, nyquist_period};
  validate(p);
  return p;
}

PulseSpec PulseSpec::sinc(double nyquist_period) {
  PulseSpec p{PulseFamily::sinc, 0.0, nyquist_period};
  validate(p);
  return p;
}

double bandwidth(const PulseSpec& pulse) {
  validate(pulse);
  if (pulse.family == PulseFamily::sinc) return 1.0 / pulse.nyquist_period;
  return (1.0 + pulse.roll_off) / pulse.nyquist_period;
}

double saturation_threshold(const PulseSpec& pulse) {
  return 1.0 / (bandwidth(pulse) * pulse.nyquist_period);
}

double spectrum_sq(const PulseSpec& pulse, double f) {
  const double t = pulse.nyquist_period;
  const double af = std::fabs(f);
  if (pulse.family == PulseFamily::sinc) {
    return af <= 0.5 / t ? t : 0.0;
  }
  const double beta = pulse.roll_off;
  const double pass_edge = (1.0 - beta) / (2.0 * t);
  const double stop_edge = (1.0 + beta) / (2.0 * t);
  if (af <= pass_edge) return t;
  if (af >= stop_edge) return 0.0;
  // raised-cosine taper; beta > 0 here since the band is non-empty
  return 0.5 * t * (1.0 + std::cos(kPi * t / beta * (af - pass_edge)));
}

double spectrum_amp(const PulseSpec& pulse, double f) {
  const double t = pulse.nyquist_period;
  const double af = std::fabs(f);
  if (pulse.family == PulseFamily::sinc) {
    return af <= 0.5 / t ? std::sqrt(t) : 0.0;
  }
  const double beta = pulse.roll_off;
  const double pass_edge = (1.0 - beta) / (2.0 * t);
  const double stop_edge = (1.0 + beta) / (2.0 * t);
  if (af <= pass_edge) return std::sqrt(t);
  if (af >= stop_edge) return 0.0;
  // sqrt of the taper in closed form: cos of the half angle stays exact at
  // the band edge instead of sqrt(eps) noise
  return std::sqrt(t) * std::cos(0.5 * kPi * t / beta * (af - pass_edge));
}

double folded_spectrum_sq(const PulseSpec& pulse, double compression, double f,
                          FoldedSpectrumKind kind) {
  validate(pulse);
  if (!(compression > 0.0 && compression <= 1.0)) {
    throw std::invalid_argument("folded_spectrum_sq: compression in (0, 1]");
  }
  const double rate = 1.0 / (compression * pulse.nyquist_period);
  if (std::fabs(f) > 0.5 * rate) return 0.0;
  const double w = bandwidth(pulse);
  const int n_max = static_cast<int>(
                        std::ceil(w * compression * pulse.nyquist_period)) +
                    1;
  if (kind == FoldedSpectrumKind::folded) {
    double sum = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
      sum += spectrum_sq(pulse, f - n * rate);
    }
    return sum;
  }
  double aliases = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    if (n == 0) continue;
    aliases += spectrum_sq(pulse, f - n * rate);
  }
  return spectrum_sq(pulse, f) - aliases;
}

std::vector<double> spectrum_breakpoints(const PulseSpec& pulse) {
  const double t = pulse.nyquist_period;
  if (pulse.family == PulseFamily::sinc) {
    return {-0.5 / t, 0.5 / t};
  }
  const double pass_edge = (1.0 - pulse.roll_off) / (2.0 * t);
  const double stop_edge = (1.0 + pulse.roll_off) / (2.0 * t);
  return {-stop_edge, -pass_edge, pass_edge, stop_edge};
}

double spectrum_energy(const PulseSpec& pulse) {
  validate(pulse);
  const double half_w = 0.5 * bandwidth(pulse);
  const auto knots = spectrum_breakpoints(pulse);
  return detail::integrate([&](double f) { return spectrum_sq(pulse, f); },
                           -half_w, half_w, knots, 1e-13);
}

}  // namespace ftnisac

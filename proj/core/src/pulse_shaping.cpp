#include "flame/pulse_shaping.hpp"

#include <algorithm>
#include <cmath>

#include "flame/constants.hpp"

namespace flame {

namespace {
void require(bool ok, const char* field, const char* msg) {
  if (!ok) throw validation_error(field, msg);
}

// 10-90% width of the unit erf step 0.5*(1+erf(t/(sqrt(2)*s))) is 2.5631*s.
constexpr double erf_step_10_90 = 2.56310313109;

double erf_step(double t, double sigma) {
  return 0.5 * (1.0 + std::erf(t / (std::sqrt(2.0) * sigma)));
}

double linear_step(double t, double rise) {
  // 10-90% time of a linear ramp of total duration rise/0.8.
  const double full = rise / 0.8;
  return std::clamp(t / full + 0.5, 0.0, 1.0);
}
}  // namespace

void SignalPulse::validate() const {
  require(fwhm > 0, "signal.fwhm", "must be > 0");
  require(mean_photons > 0, "signal.mean_photons", "must be > 0");
}

void ControlPulse::validate() const {
  require(fwhm > 0, "control.fwhm", "must be > 0");
  require(rise_fall_10_90 > 0, "control.rise_fall_10_90", "must be > 0");
  require(extinction_ratio > 1, "control.extinction_ratio", "must be > 1");
  require(peak_power >= 0, "control.peak_power", "must be >= 0");
  require(after_pulse_fraction >= 0 && after_pulse_fraction < 1,
          "control.after_pulse_fraction", "must be in [0,1)");
  if (fwhm < 2.0 * rise_fall_10_90)
    throw infeasible_pulse_error(
        "control pulse FWHM shorter than twice the 10-90% edge time");
}

void TimingPlan::validate() const {
  require(storage_time > 0, "timing.storage_time", "must be > 0");
  require(integration_window > 0, "timing.integration_window", "must be > 0");
}

double signal_envelope(const SignalPulse& pulse, double t) {
  // Intensity I(t) = A^2 exp(-4 ln2 (t-c)^2/fwhm^2), integral = mean_photons.
  const double a = 4.0 * std::log(2.0) / (pulse.fwhm * pulse.fwhm);
  const double peak_intensity =
      pulse.mean_photons * std::sqrt(a / constants::pi);
  const double dt = t - pulse.center;
  return std::sqrt(peak_intensity) * std::exp(-0.5 * a * dt * dt);
}

double control_intensity_profile(const ControlPulse& pulse, double t) {
  const double half = 0.5 * pulse.fwhm;
  const double dt = t - pulse.center;
  double s;
  if (pulse.edge == EdgeModel::erf) {
    const double sigma = pulse.rise_fall_10_90 / erf_step_10_90;
    s = erf_step(dt + half, sigma) * (1.0 - erf_step(dt - half, sigma));
  } else {
    s = linear_step(dt + half, pulse.rise_fall_10_90) *
        (1.0 - linear_step(dt - half, pulse.rise_fall_10_90));
  }
  if (pulse.after_pulse_fraction > 0) {
    ControlPulse replica = pulse;
    replica.after_pulse_fraction = 0.0;
    replica.center = pulse.center + pulse.after_pulse_delay;
    const double floorless =
        control_intensity_profile(replica, t);  // replica has its own floor
    s = std::max(s, pulse.after_pulse_fraction * floorless);
  }
  const double floor = 1.0 / pulse.extinction_ratio;
  return floor + (1.0 - floor) * s;
}

double control_envelope(const ControlPulse& pulse, double t, double omega_cal,
                        double power_cal) {
  const double omega_peak = omega_cal * std::sqrt(pulse.peak_power / power_cal);
  return omega_peak * std::sqrt(control_intensity_profile(pulse, t));
}

double effective_fractional_delay(double lifetime, double signal_fwhm) {
  if (lifetime <= 0 || signal_fwhm <= 0)
    throw std::domain_error("effective_fractional_delay: inputs must be > 0");
  return lifetime / signal_fwhm;
}

}  // namespace flame

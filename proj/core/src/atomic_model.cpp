#include "flame/atomic_model.hpp"

#include <cmath>
#include <string>

#include "flame/constants.hpp"

namespace flame {

namespace {
void require(bool ok, const char* field, const char* msg) {
  if (!ok) throw validation_error(field, msg);
}
}  // namespace

void LadderScheme::validate() const {
  require(lambda_signal > 0, "lambda_signal", "must be > 0");
  require(lambda_control > 0, "lambda_control", "must be > 0");
  require(lambda_dressing > 0, "lambda_dressing", "must be > 0");
  require(omega_control_peak >= 0, "omega_control_peak", "must be >= 0");
  require(omega_dressing >= 0, "omega_dressing", "must be >= 0");
  require(control_power_cal > 0, "control_power_cal", "must be > 0");
  require(gamma_intermediate >= 0, "gamma_intermediate", "must be >= 0");
  require(gamma_storage >= 0, "gamma_storage", "must be >= 0");
  require(dressing_pole_guard > 0, "dressing_pole_guard", "must be > 0");
}

void ThermalEnsemble::validate() const {
  require(temperature > 0, "temperature", "must be > 0");
  require(mass > 0, "mass", "must be > 0");
  require(optical_depth >= 0, "optical_depth", "must be >= 0");
  require(pumping_efficiency >= 0 && pumping_efficiency <= 1,
          "pumping_efficiency", "must be in [0,1]");
  require(signal_waist > 0, "signal_waist", "must be > 0");
  require(control_waist > 0, "control_waist", "must be > 0");
  require(cell_length > 0, "cell_length", "must be > 0");
}

void TransmissionBudget::validate() const {
  require(cell > 0 && cell <= 1, "cell", "must be in (0,1]");
  require(filters > 0 && filters <= 1, "filters", "must be in (0,1]");
  require(fiber_coupling > 0 && fiber_coupling <= 1, "fiber_coupling",
          "must be in (0,1]");
  require(other_optics > 0 && other_optics <= 1, "other_optics",
          "must be in (0,1]");
  require(rb85_penalty > 0 && rb85_penalty <= 1, "rb85_penalty",
          "must be in (0,1]");
}

double thermal_velocity_sigma(double temperature, double mass) {
  if (mass <= 0) throw validation_error("mass", "must be > 0");
  if (temperature < 0) throw validation_error("temperature", "must be >= 0");
  return std::sqrt(constants::k_boltzmann * temperature / mass);
}

double two_photon_wavevector_mismatch(const LadderScheme& scheme) {
  const double ks = constants::two_pi / scheme.lambda_signal;
  const double kc = constants::two_pi / scheme.lambda_control;
  if (scheme.geometry == BeamGeometry::counter_propagating)
    return std::abs(ks - kc);
  return ks + kc;
}

double doppler_efold_time(double dk, double sigma_v) {
  if (dk < 0 || sigma_v < 0)
    throw std::domain_error("doppler_efold_time: negative input");
  const double rate = dk * sigma_v;
  if (rate == 0.0) return infinite_time;
  return 1.0 / rate;
}

double dressing_light_shift(double omega_d, double delta_d, double k_d,
                            double v, double pole_guard) {
  if (omega_d == 0.0) return 0.0;
  const double detuning_seen = delta_d - k_d * v / constants::two_pi;
  if (std::abs(detuning_seen) < pole_guard)
    throw singular_velocity_error(
        v, "dressing_light_shift: velocity class v=" + std::to_string(v) +
               " m/s within " + std::to_string(pole_guard) +
               " Hz of the dressing pole");
  return omega_d * omega_d / (4.0 * detuning_seen);
}

double compensation_fraction(const LadderScheme& scheme) {
  const double dk = two_photon_wavevector_mismatch(scheme);
  if (dk == 0.0)
    throw std::domain_error(
        "compensation_fraction: undefined for zero wavevector mismatch");
  if (scheme.omega_dressing == 0.0) return 0.0;
  const double kd_over_2pi = 1.0 / scheme.lambda_dressing;
  const double shift_slope = scheme.omega_dressing * scheme.omega_dressing *
                             kd_over_2pi /
                             (4.0 * scheme.delta_dressing * scheme.delta_dressing);
  const double doppler_slope = dk / constants::two_pi;
  return shift_slope / doppler_slope;
}

double resonant_transmission(double od) {
  if (od < 0) throw std::domain_error("resonant_transmission: od < 0");
  return std::exp(-od);
}

}  // namespace flame

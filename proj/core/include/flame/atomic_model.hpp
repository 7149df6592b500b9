#pragma once

#include <limits>

#include "flame/errors.hpp"

namespace flame {

enum class BeamGeometry { counter_propagating, co_propagating };

/// Three-level ladder plus auxiliary dressing transition.  All frequencies
/// are ordinary frequencies in Hz (not angular); conversion to angular
/// frequency happens inside the solver only.
struct LadderScheme {
  double lambda_signal = 780.241e-9;    // m
  double lambda_control = 775.978e-9;   // m
  double lambda_dressing = 1274e-9;     // m
  double delta_signal = 0.0;            // Hz; 1.1e9 for off-resonant storage
  double delta_two_photon = -50e6;      // Hz
  double omega_control_peak = 640e6;    // Hz, Rabi at the calibration power
  double control_power_cal = 1.4;       // W, power at which omega_control_peak holds
  double omega_dressing = 30e6;         // Hz
  double delta_dressing = -570e6;       // Hz
  double gamma_intermediate = 3.03e6;   // Hz, intermediate coherence decay
  double gamma_storage = 0.334e6;       // Hz, storage coherence decay
  BeamGeometry geometry = BeamGeometry::counter_propagating;
  double dressing_pole_guard = 1e6;     // Hz

  void validate() const;
};

struct ThermalEnsemble {
  double temperature = 338.15;       // K
  double mass = 1.44316060e-25;      // kg (87Rb)
  double optical_depth = 19.0;
  double pumping_efficiency = 0.94;
  double signal_waist = 110e-6;      // m
  double control_waist = 180e-6;     // m
  double dressing_waist = 210e-6;    // m
  double cell_length = 0.025;        // m

  void validate() const;
};

/// Passive setup transmission factors (intensity fractions).
struct TransmissionBudget {
  double cell = 0.884;
  double filters = 0.9444;
  double fiber_coupling = 0.884;
  double other_optics = 0.894;
  double rb85_penalty = 0.85;  // applied only for off-resonant storage

  double setup_transmission() const {
    return cell * filters * fiber_coupling * other_optics;
  }
  void validate() const;
};

inline constexpr double infinite_time = std::numeric_limits<double>::infinity();

/// 1-D rms thermal velocity sqrt(kB*T/m).
double thermal_velocity_sigma(double temperature, double mass);

/// Magnitude of the two-photon wavevector mismatch |k_s -/+ k_c| in rad/m.
double two_photon_wavevector_mismatch(const LadderScheme& scheme);

/// Storage time at which the velocity-averaged efficiency
/// exp(-(dk*sigma_v*t)^2) falls to 1/e; +inf when dk*sigma_v = 0.
double doppler_efold_time(double dk, double sigma_v);

/// Light shift (Hz) of the storage level for velocity class v, dressing
/// co-propagating with the signal: omega_d^2 / (4*(delta_d - k_d*v/2pi)).
double dressing_light_shift(double omega_d, double delta_d, double k_d,
                            double v, double pole_guard = 1e6);

/// First-order diagnostic: slope of the dressing shift at v = 0 divided by
/// the residual two-photon Doppler slope dk/2pi.  1 = exact cancellation.
double compensation_fraction(const LadderScheme& scheme);

/// Weak-probe resonant intensity transmission exp(-od).
double resonant_transmission(double od);

}  // namespace flame

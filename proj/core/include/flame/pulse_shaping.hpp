#pragma once

#include <optional>

#include "flame/errors.hpp"

namespace flame {

enum class EdgeModel { erf, linear };

/// Gaussian signal pulse.  The envelope is an amplitude whose squared
/// modulus (intensity, photons/s) integrates to mean_photons.
struct SignalPulse {
  double fwhm = 2e-9;        // s, intensity FWHM
  double center = 0.0;       // s
  double mean_photons = 0.1;

  void validate() const;
};

/// Flat-top control pulse with smooth edges and a finite extinction floor.
struct ControlPulse {
  double fwhm = 4e-9;              // s, intensity FWHM
  double rise_fall_10_90 = 1.2e-9; // s
  double extinction_ratio = 800.0; // peak/floor intensity
  double center = 0.0;             // s
  double peak_power = 1.4;         // W
  EdgeModel edge = EdgeModel::erf;
  // Optional after-pulse (off by default): a replica at +after_pulse_delay
  // with after_pulse_fraction of the peak intensity.
  double after_pulse_fraction = 0.0;
  double after_pulse_delay = 0.0;  // s

  void validate() const;
};

struct TimingPlan {
  double signal_center = 0.0;             // s
  double storage_control_center = 0.0;    // s
  double storage_time = 20e-9;            // s, storage-to-retrieval separation
  double integration_window = 6e-9;       // s
  // Start of the retrieved-pulse window; defaults to the rising edge of the
  // retrieval control (center - fwhm/2).
  std::optional<double> retrieved_window_start;

  double retrieval_control_center() const {
    return storage_control_center + storage_time;
  }
  void validate() const;
};

/// Signal amplitude at time t; intensity FWHM = pulse.fwhm and the intensity
/// integral equals pulse.mean_photons.
double signal_envelope(const SignalPulse& pulse, double t);

/// Normalized control intensity (1 at the flat top, 1/ER floor).
double control_intensity_profile(const ControlPulse& pulse, double t);

/// Control Rabi frequency (Hz) at time t, using the sqrt(power) calibration
/// omega_cal <-> power_cal (640 MHz at 1.4 W for the paper preset).
double control_envelope(const ControlPulse& pulse, double t,
                        double omega_cal = 640e6, double power_cal = 1.4);

/// lifetime / signal_fwhm.
double effective_fractional_delay(double lifetime, double signal_fwhm);

}  // namespace flame

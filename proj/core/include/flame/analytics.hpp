#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flame/atomic_model.hpp"

namespace flame {

/// eta(t) = eta0 * exp(-t^2/(2 tau_sigma^2) - t/tau_gamma).
/// Infinity sentinels switch off the corresponding channel.
double decay_model(double t, double eta0, double tau_sigma, double tau_gamma);

/// Positive root of t^2/(2 tau_sigma^2) + t/tau_gamma = 1 (1/e lifetime).
double lifetime_1e(double tau_sigma, double tau_gamma);

struct DecayFitResult {
  double eta0 = 0.0;
  double tau_sigma = 0.0;
  double tau_gamma = 0.0;
  double tau_s = 0.0;  // derived 1/e lifetime
  double eta0_err = 0.0;
  double tau_sigma_err = 0.0;
  double tau_gamma_err = 0.0;
  double residual_norm = 0.0;  // weighted ||r|| at the optimum
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Weighted least squares of the decay model over (t, eta) samples.
/// Deterministic: log-linear regression seeds a damped Gauss-Newton
/// refinement; uncertainties from the local quadratic approximation.
DecayFitResult fit_decay(const std::vector<std::pair<double, double>>& samples);

enum class HistogramRole { reference, retrieved, noise };

struct HistogramRecord {
  std::vector<double> bin_edges;   // s, monotone, counts.size()+1 entries
  std::vector<double> counts;      // non-negative
  HistogramRole role = HistogramRole::reference;

  void validate() const;
  /// Counts in [a, b], partial bins weighted by overlap fraction.
  double counts_in_window(double a, double b) const;
};

/// Ratio of retrieved to reference counts in the 6-ns integration windows.
/// The reference window starts at window_start; the retrieved window at
/// retrieved_window_start (defaults to window_start).
double efficiency_from_histograms(const HistogramRecord& reference,
                                  const HistogramRecord& retrieved,
                                  double window_start, double window = 6e-9,
                                  std::optional<double> retrieved_window_start =
                                      std::nullopt);

/// Parse "time_ns<delim>counts" rows into a histogram (uniform bins assumed,
/// times are bin centers).
HistogramRecord histogram_from_text(const std::string& text,
                                    HistogramRole role);

/// eta_int scaled by the setup transmission (and the 85Rb penalty when
/// off-resonant).
double end_to_end_efficiency(double eta_int, const TransmissionBudget& budget,
                             bool off_resonant);

struct NoiseBudget {
  double nu_pump = 0.92e-5;        // photons/pulse at zero control power
  double slope_on_res = 1.67e-5;   // photons/pulse/W
  double slope_off_res = 1.46e-5;  // photons/pulse/W

  void validate() const;
};

/// nu_pump + slope * control power.
double noise_per_pulse(double p_control, bool off_resonant,
                       const NoiseBudget& budget);

/// Noise photons per retrieved single-photon signal: nu / eta_e2e.
double mu1_signal_to_noise(double eta_e2e, double nu);

}  // namespace flame

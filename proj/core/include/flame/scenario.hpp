#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flame/atomic_model.hpp"
#include "flame/pulse_shaping.hpp"
#include "flame/velocity_grid.hpp"

namespace flame {

struct SolverConfig {
  std::size_t n_z = 128;          // spatial points across the cell
  double dt = 10e-12;             // s, time step
  std::size_t n_v = 16;           // velocity nodes
  int scheme_order = 4;           // time integrator order (4 = RK4)
  double convergence_tol = 1e-3;  // relative eta change under grid doubling
  VelocityGridKind grid_kind = VelocityGridKind::gauss_hermite;
  double velocity_span = 4.0;     // +-span*sigma, uniform grid only
  std::optional<std::vector<VelocityNode>> custom_velocity_nodes;
  // Optional explicit time-grid bounds; derived from the timing plan
  // when unset.
  std::optional<double> t_start;
  std::optional<double> t_end;
  bool record_stored_energy = true;
  // Radial shells approximating the finite control/signal waist ratio.
  // 1 = uniform Rabi frequencies.
  std::size_t n_shells = 1;

  void validate() const;
};

/// Complete experiment description; the unit of simulation.
struct Scenario {
  LadderScheme scheme;
  ThermalEnsemble ensemble;
  SignalPulse signal;
  ControlPulse control_storage;
  ControlPulse control_retrieval;
  TimingPlan timing;
  bool dressing_on = true;
  // Imperfect-pumping absorber: the un-pumped fraction absorbs but holds no
  // storage coherence.  The offset is the signal detuning from the un-pumped
  // absorption line; positive because that line lies below the signal
  // transition.
  bool pumping_absorber_on = true;
  double absorber_offset = 300e6;  // Hz
  // Time-of-flight decay channel, tau_tof = signal_waist / sigma_v.
  bool time_of_flight_on = true;
  TransmissionBudget budget;
  SolverConfig solver;

  bool off_resonant() const { return std::abs(scheme.delta_signal) > 100e6; }
  double sigma_v() const;
  /// Efficiency e-fold time of the time-of-flight channel.
  double tau_time_of_flight() const;
  void validate() const;
};

struct EnergyBookkeeping {
  double input = 0.0;
  double transmitted = 0.0;
  double scattered = 0.0;
  double stored_final = 0.0;
  double residual = 0.0;  // input - (transmitted + scattered + stored_final)
};

/// Full time-resolved record of one propagation.
struct PropagationRecord {
  std::vector<double> time;                          // s
  std::vector<std::complex<double>> input_field;     // amplitude at z=0
  std::vector<std::complex<double>> output_field;    // amplitude at z=L
  std::vector<double> stored_excitation;             // photons, per time
  std::vector<std::complex<double>> storage_coherence;  // integrated S
  EnergyBookkeeping energy;
};

struct Waveform {
  std::vector<double> time;       // s
  std::vector<double> intensity;  // photons/s
};

struct StorageResult {
  double eta_internal = 0.0;
  Waveform retrieved_waveform;
  double transmitted_leakage = 0.0;  // fraction of input leaked during storage
  std::vector<double> stored_energy_vs_time;
  EnergyBookkeeping energy;
  std::vector<std::string> warnings;
};

}  // namespace flame

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "flame/mb_solver.hpp"
#include "flame/scenario.hpp"

namespace flame {

/// Known dotted parameter paths that sweeps/optimizations may set on a
/// Scenario (e.g. "control.peak_power_w", "scheme.delta_two_photon_mhz").
std::vector<std::string> scenario_parameter_paths();

/// Set a parameter by path; throws validation_error for unknown paths.
void set_scenario_parameter(Scenario& scenario, const std::string& path,
                            double value);

enum class Objective { eta_internal, eta_e2e };

struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

struct ContinuousAxis {
  std::string path;
  double lower = 0.0;
  double upper = 0.0;
};

/// Per-point nested re-optimization (e.g. re-optimize control timing at each
/// swept power, the way the power-dependence measurement is taken).
struct SweepSpec {
  Scenario scenario;
  std::vector<SweepAxis> axes;
  Objective objective = Objective::eta_internal;
  std::vector<ContinuousAxis> reoptimize;
  int reoptimize_iterations = 24;
};

struct SweepPoint {
  std::map<std::string, double> parameters;
  double objective = 0.0;
  bool failed = false;
  std::string error;
};

struct OptimizationResult {
  std::map<std::string, double> best_parameters;
  double best_objective = 0.0;
  bool converged = true;
  std::vector<SweepPoint> trace;
};

double evaluate_objective(const Scenario& scenario, Objective objective,
                          unsigned jobs = 0);

/// One solver run per grid point (cartesian product of the axes).
/// Failures are recorded per point and the scan continues.
std::vector<SweepPoint> scan(const SweepSpec& spec, unsigned jobs = 0);

/// Deterministic coordinate search with golden-section refinement per axis
/// over a fixed iteration budget.
OptimizationResult optimize(const Scenario& scenario,
                            const std::vector<ContinuousAxis>& axes,
                            Objective objective, int iterations_per_axis = 24,
                            int coordinate_sweeps = 2, unsigned jobs = 0);

/// Same search over an arbitrary objective (used for tests and nested
/// optimization).
OptimizationResult optimize_function(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<ContinuousAxis>& axes, int iterations_per_axis = 24,
    int coordinate_sweeps = 2);

}  // namespace flame

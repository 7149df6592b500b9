#include "flame/scenario.hpp"

namespace flame {

void SolverConfig::validate() const {
  if (n_z == 0) throw validation_error("solver.n_z", "must be > 0");
  if (dt <= 0) throw validation_error("solver.dt", "must be > 0");
  if (n_v == 0) throw validation_error("solver.n_v", "must be > 0");
  if (scheme_order != 4)
    throw validation_error("solver.scheme_order", "only order 4 is available");
  if (convergence_tol <= 0)
    throw validation_error("solver.convergence_tol", "must be > 0");
  if (velocity_span <= 0)
    throw validation_error("solver.velocity_span", "must be > 0");
  if (n_shells == 0) throw validation_error("solver.n_shells", "must be > 0");
  if (t_start && t_end && *t_end <= *t_start)
    throw validation_error("solver.t_end", "must exceed t_start");
}

double Scenario::sigma_v() const {
  return thermal_velocity_sigma(ensemble.temperature, ensemble.mass);
}

double Scenario::tau_time_of_flight() const {
  const double sv = sigma_v();
  if (!time_of_flight_on || sv == 0.0) return infinite_time;
  return ensemble.signal_waist / sv;
}

void Scenario::validate() const {
  scheme.validate();
  ensemble.validate();
  signal.validate();
  control_storage.validate();
  control_retrieval.validate();
  timing.validate();
  budget.validate();
  solver.validate();
  if (timing.retrieval_control_center() <= timing.storage_control_center)
    throw validation_error("timing.storage_time",
                           "retrieval must come after storage");
}

}  // namespace flame

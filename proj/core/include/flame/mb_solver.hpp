#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flame/scenario.hpp"

namespace flame {

struct PropagateOptions {
  /// Replace the signal input samples (complex amplitude on the time grid).
  std::optional<std::vector<std::complex<double>>> input_override;
  /// Replace the ensemble optical depth (0 = reference run, medium removed).
  std::optional<double> od_override;
  /// Worker threads for the velocity-class loop; 0 = hardware concurrency.
  /// Results are bit-identical for any value.
  unsigned jobs = 0;
};

/// Time grid the solver will use for a scenario.
std::vector<double> solver_time_grid(const Scenario& scenario);

/// Integrate the 1-D slowly-varying-envelope Maxwell-Bloch equations for the
/// ladder system over the thermal velocity grid, through the full
/// store-wait-retrieve sequence.
PropagationRecord propagate(const Scenario& scenario,
                            const PropagateOptions& options = {});

/// Full storage/retrieval run plus the medium-removed reference run;
/// efficiency from the 6-ns integration windows.
StorageResult run_storage_retrieval(const Scenario& scenario,
                                    unsigned jobs = 0);

/// One run_storage_retrieval per storage time (ascending).
std::vector<std::pair<double, double>> lifetime_curve(
    const Scenario& scenario, const std::vector<double>& storage_times,
    unsigned jobs = 0);

}  // namespace flame

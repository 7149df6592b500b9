#pragma once

#include <optional>
#include <string>

#include "flame/analytics.hpp"
#include "flame/optimizer.hpp"
#include "flame/scenario.hpp"

namespace flame {

/// Scenario plus the analysis-layer context carried by a config file.
struct ScenarioConfig {
  Scenario scenario;
  NoiseBudget noise;
  /// Measured reference values (used by `budget` and `report`).
  std::optional<double> reference_eta_int;
  std::optional<double> reference_tau_s;
  std::optional<double> reference_noise;
  std::optional<SweepSpec> sweep;  // sweep.scenario mirrors `scenario`
  std::string name;
};

/// Load a scenario config from a file path or a built-in preset name
/// (flame2_on_res, flame2_off_res, flame2_no_dressing, flame1_off_res).
/// All values carry explicit unit-suffix keys (…_ns, …_mhz); unknown keys
/// are rejected.
ScenarioConfig load_scenario(const std::string& path_or_preset);

/// Parse a config from JSON text (diagnostics carry line information).
ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::string& origin = "<string>");

/// Canonical serialization; save(load(x)) round-trips exactly.
std::string save_scenario(const ScenarioConfig& config);

}  // namespace flame

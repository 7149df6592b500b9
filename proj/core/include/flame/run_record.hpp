#pragma once

#include <cstdint>
#include <string>

namespace flame {

inline constexpr const char* toolkit_version = "0.1.0";

/// FNV-1a 64-bit hash, rendered as 16 hex digits.  Stable across platforms;
/// used to tag configs and results for reproducibility checks.
std::uint64_t fnv1a64(const std::string& text);
std::string fnv1a64_hex(const std::string& text);

/// Reproducibility envelope written next to every output: the canonical
/// scenario, the results, and hashes of both.  Re-running the same command
/// on the same config must reproduce config_hash and results_hash bit for
/// bit (wall time and timestamp are excluded from identity).
struct RunRecord {
  std::string command;
  std::string config_hash;
  std::string scenario_json;  // canonical form
  std::string results_json;
  std::string results_hash;
  double wall_time_s = 0.0;
  std::string timestamp;  // ISO 8601 UTC

  /// Assembled JSON text of the record.
  std::string to_json() const;
};

/// Build a record from the canonical scenario and a results JSON blob;
/// fills both hashes and the timestamp.
RunRecord make_run_record(const std::string& command,
                          const std::string& scenario_json,
                          const std::string& results_json,
                          double wall_time_s);

/// Write record.to_json() to <out_dir>/run_record.json (creates out_dir).
void write_run_record(const RunRecord& record, const std::string& out_dir);

}  // namespace flame

#include "flame/run_record.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace flame {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::string RunRecord::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["toolkit_version"] = toolkit_version;
  j["config_hash"] = config_hash;
  j["scenario"] = nlohmann::json::parse(scenario_json);
  j["results"] = nlohmann::json::parse(results_json);
  j["results_hash"] = results_hash;
  j["wall_time_s"] = wall_time_s;
  j["timestamp"] = timestamp;
  return j.dump(2) + "\n";
}

RunRecord make_run_record(const std::string& command,
                          const std::string& scenario_json,
                          const std::string& results_json,
                          double wall_time_s) {
  RunRecord rec;
  rec.command = command;
  rec.scenario_json = scenario_json;
  rec.results_json = results_json;
  rec.config_hash = fnv1a64_hex(scenario_json);
  rec.results_hash = fnv1a64_hex(results_json);
  rec.wall_time_s = wall_time_s;
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  rec.timestamp = buf;
  return rec;
}

void write_run_record(const RunRecord& record, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / "run_record.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record.to_json();
}

}  // namespace flame

#include "flame/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "flame/constants.hpp"
#include "flame/presets.hpp"
#include "json.hpp"

namespace flame {

namespace {

using nlohmann::json;

struct Unit {
  const char* suffix;
  double scale;
  double offset = 0.0;
};

const std::vector<Unit> kLength{{"_m", 1.0}, {"_mm", 1e-3}, {"_um", 1e-6},
                                {"_nm", 1e-9}};
const std::vector<Unit> kFrequency{{"_hz", 1.0}, {"_khz", 1e3},
                                   {"_mhz", 1e6}, {"_ghz", 1e9}};
const std::vector<Unit> kTime{{"_s", 1.0}, {"_us", 1e-6}, {"_ns", 1e-9},
                              {"_ps", 1e-12}};
const std::vector<Unit> kTemperature{{"_k", 1.0}, {"_c", 1.0, 273.15}};
const std::vector<Unit> kMass{{"_kg", 1.0},
                              {"_amu", constants::atomic_mass_unit}};
const std::vector<Unit> kPower{{"_w", 1.0}, {"_mw", 1e-3}};
const std::vector<Unit> kPlain{{"", 1.0}};

class Reader {
 public:
  Reader(const json& root, std::string origin)
      : root_(root), origin_(std::move(origin)) {}

  const json* section(const std::string& name) {
    consume(name, /*subtree=*/false);
    auto it = root_.find(name);
    if (it == root_.end()) return nullptr;
    if (!it->is_object())
      throw validation_error(name, "must be an object");
    return &*it;
  }

  /// Read a unit-suffixed number from obj (nullptr = section absent).
  double number(const json* obj, const std::string& section,
                const std::string& field, const std::vector<Unit>& units,
                double fallback) {
    auto v = opt_number(obj, section, field, units);
    return v ? *v : fallback;
  }

  std::optional<double> opt_number(const json* obj, const std::string& section,
                                   const std::string& field,
                                   const std::vector<Unit>& units) {
    if (!obj) return std::nullopt;
    std::optional<double> result;
    for (const auto& u : units) {
      const std::string key = field + u.suffix;
      auto it = obj->find(key);
      if (it == obj->end()) continue;
      if (result)
        throw validation_error(join(section, field),
                               "given in more than one unit");
      if (!it->is_number())
        throw validation_error(join(section, key), "must be a number");
      result = it->get<double>() * u.scale + u.offset;
      consume(join(section, key), false);
    }
    return result;
  }

  static std::string join(const std::string& section,
                          const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  bool boolean(const json* obj, const std::string& section,
               const std::string& field, bool fallback) {
    if (!obj) return fallback;
    auto it = obj->find(field);
    if (it == obj->end()) return fallback;
    if (!it->is_boolean())
      throw validation_error(join(section, field), "must be a boolean");
    consume(join(section, field), false);
    return it->get<bool>();
  }

  bool top_boolean(const std::string& field, bool fallback) {
    return boolean(&root_, "", field, fallback);
  }

  std::string text(const json* obj, const std::string& section,
                   const std::string& field, const std::string& fallback) {
    if (!obj) return fallback;
    auto it = obj->find(field);
    if (it == obj->end()) return fallback;
    if (!it->is_string())
      throw validation_error(join(section, field), "must be a string");
    consume(join(section, field), false);
    return it->get<std::string>();
  }

  void consume(const std::string& path, bool subtree) {
    if (subtree)
      consumed_prefixes_.insert(path);
    else
      consumed_.insert(path);
  }

  /// Reject keys that were never consumed.
  void finish() const {
    std::vector<std::string> unknown;
    walk(root_, "", unknown);
    if (!unknown.empty())
      throw validation_error(unknown.front(),
                             "unknown key in " + origin_);
  }

 private:
  void walk(const json& node, const std::string& path,
            std::vector<std::string>& unknown) const {
    if (!node.is_object()) {
      if (!known(path)) unknown.push_back(path);
      return;
    }
    if (!path.empty() && !known_section(path)) {
      unknown.push_back(path);
      return;
    }
    for (auto it = node.begin(); it != node.end(); ++it) {
      const std::string sub = path.empty() ? it.key() : path + "." + it.key();
      if (prefix_consumed(sub)) continue;
      if (it->is_object()) {
        walk(*it, sub, unknown);
      } else if (!known(sub)) {
        unknown.push_back(sub);
      }
    }
  }

  bool known(const std::string& path) const {
    return consumed_.count(path) > 0 || prefix_consumed(path);
  }
  bool known_section(const std::string& path) const {
    // A section is fine if it was opened via section()/consume.
    return consumed_.count(path) > 0 || prefix_consumed(path);
  }
  bool prefix_consumed(const std::string& path) const {
    for (const auto& p : consumed_prefixes_) {
      if (path == p) return true;
      if (path.size() > p.size() && path.compare(0, p.size(), p) == 0 &&
          path[p.size()] == '.')
        return true;
    }
    return false;
  }

  const json& root_;
  std::string origin_;
  std::set<std::string> consumed_;
  std::set<std::string> consumed_prefixes_;
};

BeamGeometry parse_geometry(const std::string& s) {
  if (s == "counter_propagating") return BeamGeometry::counter_propagating;
  if (s == "co_propagating") return BeamGeometry::co_propagating;
  throw validation_error("scheme.geometry", "unknown value '" + s + "'");
}

EdgeModel parse_edge(const std::string& s) {
  if (s == "erf") return EdgeModel::erf;
  if (s == "linear") return EdgeModel::linear;
  throw validation_error("control.edge", "unknown value '" + s + "'");
}

VelocityGridKind parse_grid(const std::string& s) {
  if (s == "gauss_hermite") return VelocityGridKind::gauss_hermite;
  if (s == "uniform") return VelocityGridKind::uniform;
  if (s == "custom") return VelocityGridKind::custom;
  throw validation_error("solver.grid", "unknown value '" + s + "'");
}

Objective parse_objective(const std::string& s) {
  if (s == "eta_internal") return Objective::eta_internal;
  if (s == "eta_e2e") return Objective::eta_e2e;
  throw validation_error("sweep.objective", "unknown value '" + s + "'");
}

ControlPulse parse_control(Reader& r, const json* obj,
                           const std::string& section,
                           const ControlPulse& defaults) {
  ControlPulse p = defaults;
  p.fwhm = r.number(obj, section, "fwhm", kTime, p.fwhm);
  p.rise_fall_10_90 =
      r.number(obj, section, "rise_fall_10_90", kTime, p.rise_fall_10_90);
  p.extinction_ratio =
      r.number(obj, section, "extinction_ratio", kPlain, p.extinction_ratio);
  p.peak_power = r.number(obj, section, "peak_power", kPower, p.peak_power);
  p.edge = parse_edge(r.text(obj, section, "edge",
                             p.edge == EdgeModel::erf ? "erf" : "linear"));
  p.after_pulse_fraction = r.number(obj, section, "after_pulse_fraction",
                                    kPlain, p.after_pulse_fraction);
  p.after_pulse_delay = r.number(obj, section, "after_pulse_delay", kTime,
                                 p.after_pulse_delay);
  return p;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw validation_error(
        origin, "parse error near line " +
                    std::to_string(line_of_byte(json_text, e.byte)) + ": " +
                    e.what());
  }
  if (!root.is_object())
    throw validation_error(origin, "config root must be an object");

  Reader r(root, origin);
  ScenarioConfig cfg;
  cfg.name = r.text(&root, "", "name", "");
  r.consume("provenance", true);

  Scenario& sc = cfg.scenario;
  {
    const json* s = r.section("scheme");
    auto& sch = sc.scheme;
    sch.lambda_signal =
        r.number(s, "scheme", "lambda_signal", kLength, sch.lambda_signal);
    sch.lambda_control =
        r.number(s, "scheme", "lambda_control", kLength, sch.lambda_control);
    sch.lambda_dressing =
        r.number(s, "scheme", "lambda_dressing", kLength, sch.lambda_dressing);
    sch.delta_signal =
        r.number(s, "scheme", "delta_signal", kFrequency, sch.delta_signal);
    sch.delta_two_photon = r.number(s, "scheme", "delta_two_photon",
                                    kFrequency, sch.delta_two_photon);
    sch.omega_control_peak = r.number(s, "scheme", "omega_control_peak",
                                      kFrequency, sch.omega_control_peak);
    sch.control_power_cal = r.number(s, "scheme", "control_power_cal", kPower,
                                     sch.control_power_cal);
    sch.omega_dressing =
        r.number(s, "scheme", "omega_dressing", kFrequency, sch.omega_dressing);
    sch.delta_dressing =
        r.number(s, "scheme", "delta_dressing", kFrequency, sch.delta_dressing);
    sch.gamma_intermediate = r.number(s, "scheme", "gamma_intermediate",
                                      kFrequency, sch.gamma_intermediate);
    sch.gamma_storage =
        r.number(s, "scheme", "gamma_storage", kFrequency, sch.gamma_storage);
    sch.geometry = parse_geometry(
        r.text(s, "scheme", "geometry",
               sch.geometry == BeamGeometry::counter_propagating
                   ? "counter_propagating"
                   : "co_propagating"));
    sch.dressing_pole_guard = r.number(s, "scheme", "dressing_pole_guard",
                                       kFrequency, sch.dressing_pole_guard);
  }
  {
    const json* s = r.section("ensemble");
    auto& en = sc.ensemble;
    en.temperature =
        r.number(s, "ensemble", "temperature", kTemperature, en.temperature);
    en.mass = r.number(s, "ensemble", "mass", kMass, en.mass);
    en.optical_depth =
        r.number(s, "ensemble", "optical_depth", kPlain, en.optical_depth);
    en.pumping_efficiency = r.number(s, "ensemble", "pumping_efficiency",
                                     kPlain, en.pumping_efficiency);
    en.signal_waist =
        r.number(s, "ensemble", "signal_waist", kLength, en.signal_waist);
    en.control_waist =
        r.number(s, "ensemble", "control_waist", kLength, en.control_waist);
    en.dressing_waist =
        r.number(s, "ensemble", "dressing_waist", kLength, en.dressing_waist);
    en.cell_length =
        r.number(s, "ensemble", "cell_length", kLength, en.cell_length);
  }
  {
    const json* s = r.section("signal");
    sc.signal.fwhm = r.number(s, "signal", "fwhm", kTime, sc.signal.fwhm);
    sc.signal.mean_photons =
        r.number(s, "signal", "mean_photons", kPlain, sc.signal.mean_photons);
  }
  {
    const json* s = r.section("control_storage");
    sc.control_storage =
        parse_control(r, s, "control_storage", sc.control_storage);
    const json* s2 = r.section("control_retrieval");
    sc.control_retrieval =
        parse_control(r, s2, "control_retrieval", sc.control_retrieval);
  }
  {
    const json* s = r.section("timing");
    auto& tm = sc.timing;
    tm.signal_center =
        r.number(s, "timing", "signal_center", kTime, tm.signal_center);
    tm.storage_control_center = r.number(s, "timing", "storage_control_center",
                                         kTime, tm.storage_control_center);
    tm.storage_time =
        r.number(s, "timing", "storage_time", kTime, tm.storage_time);
    tm.integration_window = r.number(s, "timing", "integration_window", kTime,
                                     tm.integration_window);
    tm.retrieved_window_start =
        r.opt_number(s, "timing", "retrieved_window_start", kTime);
    // Pulse centers are owned by the timing plan.
    sc.signal.center = tm.signal_center;
    sc.control_storage.center = tm.storage_control_center;
    sc.control_retrieval.center = tm.retrieval_control_center();
  }
  sc.dressing_on = r.top_boolean("dressing_on", sc.dressing_on);
  sc.pumping_absorber_on =
      r.top_boolean("pumping_absorber_on", sc.pumping_absorber_on);
  sc.absorber_offset = r.number(&root, "", "absorber_offset", kFrequency,
                                sc.absorber_offset);
  sc.time_of_flight_on =
      r.top_boolean("time_of_flight_on", sc.time_of_flight_on);
  {
    const json* s = r.section("budget");
    auto& b = sc.budget;
    b.cell = r.number(s, "budget", "cell", kPlain, b.cell);
    b.filters = r.number(s, "budget", "filters", kPlain, b.filters);
    b.fiber_coupling =
        r.number(s, "budget", "fiber_coupling", kPlain, b.fiber_coupling);
    b.other_optics =
        r.number(s, "budget", "other_optics", kPlain, b.other_optics);
    b.rb85_penalty =
        r.number(s, "budget", "rb85_penalty", kPlain, b.rb85_penalty);
  }
  {
    const json* s = r.section("noise");
    cfg.noise.nu_pump = r.number(s, "noise", "nu_pump", kPlain,
                                 cfg.noise.nu_pump);
    cfg.noise.slope_on_res = r.number(s, "noise", "slope_on_res_per_w", kPlain,
                                      cfg.noise.slope_on_res);
    cfg.noise.slope_off_res = r.number(s, "noise", "slope_off_res_per_w",
                                       kPlain, cfg.noise.slope_off_res);
  }
  {
    const json* s = r.section("solver");
    auto& sv = sc.solver;
    sv.n_z = static_cast<std::size_t>(
        r.number(s, "solver", "n_z", kPlain, static_cast<double>(sv.n_z)));
    sv.dt = r.number(s, "solver", "dt", kTime, sv.dt);
    sv.n_v = static_cast<std::size_t>(
        r.number(s, "solver", "n_v", kPlain, static_cast<double>(sv.n_v)));
    sv.scheme_order = static_cast<int>(r.number(
        s, "solver", "scheme_order", kPlain, sv.scheme_order));
    sv.convergence_tol =
        r.number(s, "solver", "convergence_tol", kPlain, sv.convergence_tol);
    sv.grid_kind = parse_grid(r.text(s, "solver", "grid", "gauss_hermite"));
    sv.velocity_span =
        r.number(s, "solver", "velocity_span", kPlain, sv.velocity_span);
    sv.n_shells = static_cast<std::size_t>(r.number(
        s, "solver", "n_shells", kPlain, static_cast<double>(sv.n_shells)));
    sv.t_start = r.opt_number(s, "solver", "t_start", kTime);
    sv.t_end = r.opt_number(s, "solver", "t_end", kTime);
    if (s && s->contains("custom_velocity_nodes")) {
      r.consume("solver.custom_velocity_nodes", true);
      const auto& arr = (*s)["custom_velocity_nodes"];
      if (!arr.is_array())
        throw validation_error("solver.custom_velocity_nodes",
                               "must be an array of [velocity, weight]");
      std::vector<VelocityNode> nodes;
      for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2)
          throw validation_error("solver.custom_velocity_nodes",
                                 "entries must be [velocity, weight]");
        nodes.push_back({e[0].get<double>(), e[1].get<double>()});
      }
      sv.custom_velocity_nodes = std::move(nodes);
    }
  }
  {
    const json* s = r.section("reference");
    cfg.reference_eta_int = r.opt_number(s, "reference", "eta_int_measured",
                                         kPlain);
    cfg.reference_tau_s = r.opt_number(s, "reference", "tau_s_measured",
                                       kTime);
    cfg.reference_noise = r.opt_number(s, "reference",
                                       "noise_photons_measured", kPlain);
  }
  if (root.contains("sweep")) {
    r.consume("sweep", true);
    const auto& sw = root["sweep"];
    if (!sw.is_object())
      throw validation_error("sweep", "must be an object");
    SweepSpec spec;
    if (!sw.contains("axes") || !sw["axes"].is_array())
      throw validation_error("sweep.axes", "must be an array");
    for (const auto& ax : sw["axes"]) {
      SweepAxis a;
      a.path = ax.at("path").get<std::string>();
      for (const auto& v : ax.at("values")) a.values.push_back(v.get<double>());
      spec.axes.push_back(std::move(a));
    }
    spec.objective = parse_objective(
        sw.value("objective", std::string("eta_internal")));
    if (sw.contains("reoptimize")) {
      for (const auto& ro : sw["reoptimize"]) {
        ContinuousAxis a;
        a.path = ro.at("path").get<std::string>();
        a.lower = ro.at("lower").get<double>();
        a.upper = ro.at("upper").get<double>();
        spec.reoptimize.push_back(std::move(a));
      }
    }
    spec.reoptimize_iterations =
        sw.value("reoptimize_iterations", spec.reoptimize_iterations);
    cfg.sweep = std::move(spec);
  }

  r.finish();
  sc.validate();
  if (cfg.sweep) cfg.sweep->scenario = sc;
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path_or_preset) {
  if (is_preset(path_or_preset))
    return parse_scenario(preset_json(path_or_preset),
                          "preset:" + path_or_preset);
  std::ifstream in(path_or_preset);
  if (!in)
    throw validation_error(path_or_preset,
                           "no such file and not a preset name");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path_or_preset);
}

std::string save_scenario(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  json j;
  if (!cfg.name.empty()) j["name"] = cfg.name;
  j["scheme"] = {
      {"lambda_signal_m", sc.scheme.lambda_signal},
      {"lambda_control_m", sc.scheme.lambda_control},
      {"lambda_dressing_m", sc.scheme.lambda_dressing},
      {"delta_signal_hz", sc.scheme.delta_signal},
      {"delta_two_photon_hz", sc.scheme.delta_two_photon},
      {"omega_control_peak_hz", sc.scheme.omega_control_peak},
      {"control_power_cal_w", sc.scheme.control_power_cal},
      {"omega_dressing_hz", sc.scheme.omega_dressing},
      {"delta_dressing_hz", sc.scheme.delta_dressing},
      {"gamma_intermediate_hz", sc.scheme.gamma_intermediate},
      {"gamma_storage_hz", sc.scheme.gamma_storage},
      {"geometry", sc.scheme.geometry == BeamGeometry::counter_propagating
                       ? "counter_propagating"
                       : "co_propagating"},
      {"dressing_pole_guard_hz", sc.scheme.dressing_pole_guard},
  };
  j["ensemble"] = {
      {"temperature_k", sc.ensemble.temperature},
      {"mass_kg", sc.ensemble.mass},
      {"optical_depth", sc.ensemble.optical_depth},
      {"pumping_efficiency", sc.ensemble.pumping_efficiency},
      {"signal_waist_m", sc.ensemble.signal_waist},
      {"control_waist_m", sc.ensemble.control_waist},
      {"dressing_waist_m", sc.ensemble.dressing_waist},
      {"cell_length_m", sc.ensemble.cell_length},
  };
  j["signal"] = {{"fwhm_s", sc.signal.fwhm},
                 {"mean_photons", sc.signal.mean_photons}};
  auto control_json = [](const ControlPulse& p) {
    return json{{"fwhm_s", p.fwhm},
                {"rise_fall_10_90_s", p.rise_fall_10_90},
                {"extinction_ratio", p.extinction_ratio},
                {"peak_power_w", p.peak_power},
                {"edge", p.edge == EdgeModel::erf ? "erf" : "linear"},
                {"after_pulse_fraction", p.after_pulse_fraction},
                {"after_pulse_delay_s", p.after_pulse_delay}};
  };
  j["control_storage"] = control_json(sc.control_storage);
  j["control_retrieval"] = control_json(sc.control_retrieval);
  j["timing"] = {
      {"signal_center_s", sc.timing.signal_center},
      {"storage_control_center_s", sc.timing.storage_control_center},
      {"storage_time_s", sc.timing.storage_time},
      {"integration_window_s", sc.timing.integration_window},
  };
  if (sc.timing.retrieved_window_start)
    j["timing"]["retrieved_window_start_s"] = *sc.timing.retrieved_window_start;
  j["dressing_on"] = sc.dressing_on;
  j["pumping_absorber_on"] = sc.pumping_absorber_on;
  j["absorber_offset_hz"] = sc.absorber_offset;
  j["time_of_flight_on"] = sc.time_of_flight_on;
  j["budget"] = {
      {"cell", sc.budget.cell},
      {"filters", sc.budget.filters},
      {"fiber_coupling", sc.budget.fiber_coupling},
      {"other_optics", sc.budget.other_optics},
      {"rb85_penalty", sc.budget.rb85_penalty},
  };
  j["noise"] = {{"nu_pump", cfg.noise.nu_pump},
                {"slope_on_res_per_w", cfg.noise.slope_on_res},
                {"slope_off_res_per_w", cfg.noise.slope_off_res}};
  j["solver"] = {
      {"n_z", sc.solver.n_z},
      {"dt_s", sc.solver.dt},
      {"n_v", sc.solver.n_v},
      {"scheme_order", sc.solver.scheme_order},
      {"convergence_tol", sc.solver.convergence_tol},
      {"grid", sc.solver.grid_kind == VelocityGridKind::gauss_hermite
                   ? "gauss_hermite"
                   : sc.solver.grid_kind == VelocityGridKind::uniform
                         ? "uniform"
                         : "custom"},
      {"velocity_span", sc.solver.velocity_span},
      {"n_shells", sc.solver.n_shells},
  };
  if (sc.solver.t_start) j["solver"]["t_start_s"] = *sc.solver.t_start;
  if (sc.solver.t_end) j["solver"]["t_end_s"] = *sc.solver.t_end;
  if (sc.solver.custom_velocity_nodes) {
    json arr = json::array();
    for (const auto& nd : *sc.solver.custom_velocity_nodes)
      arr.push_back(json::array({nd.velocity, nd.weight}));
    j["solver"]["custom_velocity_nodes"] = std::move(arr);
  }
  json ref;
  if (cfg.reference_eta_int) ref["eta_int_measured"] = *cfg.reference_eta_int;
  if (cfg.reference_tau_s) ref["tau_s_measured_s"] = *cfg.reference_tau_s;
  if (cfg.reference_noise)
    ref["noise_photons_measured"] = *cfg.reference_noise;
  if (!ref.empty()) j["reference"] = std::move(ref);
  if (cfg.sweep) {
    json sw;
    sw["axes"] = json::array();
    for (const auto& ax : cfg.sweep->axes)
      sw["axes"].push_back({{"path", ax.path}, {"values", ax.values}});
    sw["objective"] = cfg.sweep->objective == Objective::eta_internal
                          ? "eta_internal"
                          : "eta_e2e";
    if (!cfg.sweep->reoptimize.empty()) {
      sw["reoptimize"] = json::array();
      for (const auto& ro : cfg.sweep->reoptimize)
        sw["reoptimize"].push_back({{"path", ro.path},
                                    {"lower", ro.lower},
                                    {"upper", ro.upper}});
    }
    sw["reoptimize_iterations"] = cfg.sweep->reoptimize_iterations;
    j["sweep"] = std::move(sw);
  }
  return j.dump(2) + "\n";
}

}  // namespace flame

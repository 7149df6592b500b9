// Command-line harness: scenario runs, sweeps, fits, and summary reports.
// Every command writes a run record plus delimited tables to --out.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flame/analytics.hpp"
#include "flame/config.hpp"
#include "flame/mb_solver.hpp"
#include "flame/optimizer.hpp"
#include "flame/presets.hpp"
#include "flame/run_record.hpp"
#include "json.hpp"

namespace {

using flame::ScenarioConfig;
using json = nlohmann::json;
namespace fs = std::filesystem;

struct CommonArgs {
  std::string scenario = "flame2_on_res";
  std::string out = "out";
  unsigned jobs = 0;
  unsigned seed = 0;
};

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_table(const fs::path& path, const std::string& header,
                 const std::vector<std::vector<double>>& rows) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << header << "\n" << std::setprecision(12);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "\t" : "") << row[i];
    out << "\n";
  }
}

flame::RunRecord finish_run(const std::string& command,
                            const ScenarioConfig& cfg, const json& results,
                            const std::string& out_dir, double wall_s) {
  auto rec = flame::make_run_record(command, flame::save_scenario(cfg),
                                    results.dump(2), wall_s);
  flame::write_run_record(rec, out_dir);
  return rec;
}

json simulate_results(const ScenarioConfig& cfg, unsigned jobs,
                      const std::string& out_dir) {
  auto res = flame::run_storage_retrieval(cfg.scenario, jobs);
  const double power = cfg.scenario.control_storage.peak_power;
  const double eta_e2e = flame::end_to_end_efficiency(
      res.eta_internal, cfg.scenario.budget, cfg.scenario.off_resonant());
  const double nu =
      flame::noise_per_pulse(power, cfg.scenario.off_resonant(), cfg.noise);

  json j;
  j["eta_internal"] = res.eta_internal;
  j["eta_e2e"] = eta_e2e;
  j["transmitted_leakage"] = res.transmitted_leakage;
  j["noise_photons_per_pulse"] = nu;
  j["mu1"] = flame::mu1_signal_to_noise(eta_e2e, nu);
  j["energy"] = {{"input", res.energy.input},
                 {"transmitted", res.energy.transmitted},
                 {"scattered", res.energy.scattered},
                 {"stored_final", res.energy.stored_final},
                 {"residual", res.energy.residual}};
  j["warnings"] = res.warnings;

  std::vector<std::vector<double>> rows;
  const auto& wf = res.retrieved_waveform;
  for (std::size_t i = 0; i < wf.time.size(); ++i) {
    double stored = i < res.stored_energy_vs_time.size()
                        ? res.stored_energy_vs_time[i]
                        : 0.0;
    rows.push_back({wf.time[i] * 1e9, wf.intensity[i], stored});
  }
  write_table(fs::path(out_dir) / "waveform.tsv",
              "time_ns\toutput_intensity\tstored_excitation", rows);
  return j;
}

json lifetime_results(const ScenarioConfig& cfg, unsigned jobs,
                      const std::vector<double>& times_ns,
                      const std::string& out_dir) {
  std::vector<double> times_s;
  for (double t : times_ns) times_s.push_back(t * 1e-9);
  auto curve = flame::lifetime_curve(cfg.scenario, times_s, jobs);
  auto fit = flame::fit_decay(curve);

  json j;
  j["curve"] = json::array();
  std::vector<std::vector<double>> rows;
  for (const auto& [t, eta] : curve) {
    j["curve"].push_back({t, eta});
    rows.push_back({t * 1e9, eta});
  }
  j["fit"] = {{"eta0", fit.eta0},
              {"tau_sigma_ns", fit.tau_sigma * 1e9},
              {"tau_gamma_ns", fit.tau_gamma * 1e9},
              {"tau_s_ns", fit.tau_s * 1e9},
              {"converged", fit.converged},
              {"message", fit.message}};
  write_table(fs::path(out_dir) / "fig2_lifetime.tsv",
              "storage_time_ns\teta_internal", rows);
  return j;
}

json sweep_results(const ScenarioConfig& cfg, unsigned jobs,
                   const std::string& out_dir) {
  if (!cfg.sweep)
    throw flame::validation_error("sweep", "config carries no sweep block");
  auto points = flame::scan(*cfg.sweep, jobs);

  // Column order: first point's parameter keys (maps iterate sorted).
  std::vector<std::string> cols;
  if (!points.empty())
    for (const auto& [k, v] : points.front().parameters) cols.push_back(k);
  std::string header;
  for (const auto& c : cols) header += c + "\t";
  header += "objective\tfailed";

  json j;
  j["objective"] =
      cfg.sweep->objective == flame::Objective::eta_internal ? "eta_internal"
                                                             : "eta_e2e";
  j["points"] = json::array();
  std::vector<std::vector<double>> rows;
  for (const auto& pt : points) {
    json p;
    p["parameters"] = pt.parameters;
    p["objective"] = pt.objective;
    p["failed"] = pt.failed;
    if (pt.failed) p["error"] = pt.error;
    j["points"].push_back(std::move(p));
    std::vector<double> row;
    for (const auto& c : cols) {
      auto it = pt.parameters.find(c);
      row.push_back(it == pt.parameters.end() ? 0.0 : it->second);
    }
    row.push_back(pt.objective);
    row.push_back(pt.failed ? 1.0 : 0.0);
    rows.push_back(std::move(row));
  }
  std::string table = "sweep.tsv";
  if (!cfg.sweep->axes.empty()) {
    const std::string& p = cfg.sweep->axes.front().path;
    if (p == "control.peak_power_w") table = "fig3a_sweep.tsv";
    if (p == "signal.fwhm_ns") table = "fig4_sweep.tsv";
  }
  write_table(fs::path(out_dir) / table, header, rows);
  return j;
}

json fit_results(const std::string& data_path, const std::string& out_dir) {
  std::ifstream in(data_path);
  if (!in)
    throw flame::validation_error(data_path, "cannot open data file");
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream row(line);
    double t_ns = 0.0, eta = 0.0;
    if (row >> t_ns >> eta) samples.emplace_back(t_ns * 1e-9, eta);
  }
  auto fit = flame::fit_decay(samples);
  json j;
  j["samples"] = samples.size();
  j["eta0"] = fit.eta0;
  j["eta0_err"] = fit.eta0_err;
  j["tau_sigma_ns"] = fit.tau_sigma * 1e9;
  j["tau_sigma_err_ns"] = fit.tau_sigma_err * 1e9;
  j["tau_gamma_ns"] = fit.tau_gamma * 1e9;
  j["tau_gamma_err_ns"] = fit.tau_gamma_err * 1e9;
  j["tau_s_ns"] = fit.tau_s * 1e9;
  j["residual_norm"] = fit.residual_norm;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["message"] = fit.message;

  std::vector<std::vector<double>> rows;
  for (const auto& [t, eta] : samples)
    rows.push_back({t * 1e9, eta,
                    flame::decay_model(t, fit.eta0, fit.tau_sigma,
                                       fit.tau_gamma)});
  write_table(fs::path(out_dir) / "fit.tsv", "time_ns\teta\teta_model", rows);
  return j;
}

json budget_results(const ScenarioConfig& cfg, unsigned jobs,
                    const std::string& out_dir) {
  auto res = flame::run_storage_retrieval(cfg.scenario, jobs);
  const bool off_res = cfg.scenario.off_resonant();
  const auto& b = cfg.scenario.budget;
  const double eta_int_ref =
      cfg.reference_eta_int ? *cfg.reference_eta_int : res.eta_internal;

  json j;
  j["eta_internal_simulated"] = res.eta_internal;
  j["eta_internal_measured"] =
      cfg.reference_eta_int ? json(*cfg.reference_eta_int) : json();
  j["setup_transmission"] = b.setup_transmission();
  j["factors"] = {{"cell", b.cell},
                  {"filters", b.filters},
                  {"fiber_coupling", b.fiber_coupling},
                  {"other_optics", b.other_optics},
                  {"rb85_penalty", off_res ? b.rb85_penalty : 1.0}};
  j["eta_e2e_simulated"] =
      flame::end_to_end_efficiency(res.eta_internal, b, off_res);
  j["eta_e2e_from_measured_eta_int"] =
      flame::end_to_end_efficiency(eta_int_ref, b, off_res);

  // Noise vs control power at this operating point.
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= 14; ++i) {
    const double p = 0.1 * i;
    rows.push_back({p, flame::noise_per_pulse(p, off_res, cfg.noise)});
  }
  write_table(fs::path(out_dir) / "fig3b_noise.tsv",
              "control_power_w\tnoise_photons_per_pulse", rows);
  const double power = cfg.scenario.control_storage.peak_power;
  const double nu = flame::noise_per_pulse(power, off_res, cfg.noise);
  j["noise_photons_per_pulse"] = nu;
  j["mu1"] = flame::mu1_signal_to_noise(
      flame::end_to_end_efficiency(eta_int_ref, b, off_res), nu);
  return j;
}

// Table 1 analog: one row per memory configuration.  Numbers come from the
// per-preset run records written below, never recomputed inline.
json report_results(const CommonArgs& args, bool compare_flame1,
                    const std::vector<double>& times_ns) {
  struct Row {
    std::string label;
    double eta_int = 0.0, eta_e2e = 0.0, tau_s_ns = 0.0, noise = 0.0,
           mu1 = 0.0;
    bool from_reference = false;
  };
  std::vector<Row> rows;

  for (const std::string name : {"flame2_on_res", "flame2_off_res"}) {
    ScenarioConfig cfg = flame::load_scenario(name);
    const std::string dir = args.out + "/" + name;
    const auto t0 = std::chrono::steady_clock::now();
    json sim = simulate_results(cfg, args.jobs, dir + "/simulate");
    finish_run("simulate --scenario " + name, cfg, sim, dir + "/simulate",
               now_seconds(t0));
    const auto t1 = std::chrono::steady_clock::now();
    json life = lifetime_results(cfg, args.jobs, times_ns, dir + "/lifetime");
    finish_run("lifetime --scenario " + name, cfg, life, dir + "/lifetime",
               now_seconds(t1));
    Row r;
    r.label = name;
    r.eta_int = sim["eta_internal"].get<double>();
    r.eta_e2e = sim["eta_e2e"].get<double>();
    r.tau_s_ns = life["fit"]["tau_s_ns"].get<double>();
    r.noise = sim["noise_photons_per_pulse"].get<double>();
    r.mu1 = sim["mu1"].get<double>();
    rows.push_back(r);
  }
  if (compare_flame1) {
    // Previous-generation memory: stored measured constants only.
    ScenarioConfig cfg = flame::load_scenario("flame1_off_res");
    Row r;
    r.label = "flame1_off_res";
    r.from_reference = true;
    r.eta_int = cfg.reference_eta_int.value_or(0.0);
    r.eta_e2e = flame::end_to_end_efficiency(r.eta_int, cfg.scenario.budget,
                                             true);
    r.tau_s_ns = cfg.reference_tau_s.value_or(0.0) * 1e9;
    r.noise = cfg.reference_noise.value_or(0.0);
    r.mu1 = flame::mu1_signal_to_noise(r.eta_e2e, r.noise);
    rows.push_back(r);
  }

  json j;
  j["rows"] = json::array();
  fs::create_directories(args.out);
  std::ofstream table(fs::path(args.out) / "table1_report.tsv");
  table << "configuration\teta_int\teta_e2e\ttau_s_ns\tnoise_per_pulse\tmu1\t"
           "source\n"
        << std::setprecision(6);
  for (const auto& r : rows) {
    j["rows"].push_back({{"configuration", r.label},
                         {"eta_int", r.eta_int},
                         {"eta_e2e", r.eta_e2e},
                         {"tau_s_ns", r.tau_s_ns},
                         {"noise_per_pulse", r.noise},
                         {"mu1", r.mu1},
                         {"source", r.from_reference ? "measured_reference"
                                                     : "simulated"}});
    table << r.label << "\t" << r.eta_int << "\t" << r.eta_e2e << "\t"
          << r.tau_s_ns << "\t" << r.noise << "\t" << r.mu1 << "\t"
          << (r.from_reference ? "measured_reference" : "simulated") << "\n";
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal-vapor ladder memory simulation toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  app.add_option("--scenario", args.scenario,
                 "Config file path or preset name");
  app.add_option("--out", args.out, "Output directory");
  app.add_option("--jobs", args.jobs, "Worker threads (0 = all cores)");
  app.add_option("--seed", args.seed, "RNG seed for synthetic-data helpers");

  auto* simulate = app.add_subcommand(
      "simulate", "One store-retrieve run; waveform table and efficiencies");
  auto* lifetime = app.add_subcommand(
      "lifetime", "Efficiency vs storage time plus a decay-model fit");
  std::vector<double> times_ns{20, 35, 50, 65, 80, 100, 120, 150, 185, 225};
  lifetime->add_option("--times", times_ns, "Storage times in ns")
      ->delimiter(',');
  auto* sweep = app.add_subcommand(
      "sweep", "Run the sweep block of the scenario config");
  auto* fit = app.add_subcommand(
      "fit", "Fit the decay model to a time/efficiency data file");
  std::string data_path;
  fit->add_option("--data", data_path, "Delimited time_ns/eta file")
      ->required();
  auto* budget = app.add_subcommand(
      "budget", "Transmission budget, end-to-end efficiency, noise");
  auto* report = app.add_subcommand(
      "report", "Summary table across memory configurations");
  std::string compare;
  report->add_option("--compare", compare,
                     "Additional configuration (flame1)");
  std::vector<double> report_times_ns{20, 50, 80, 120, 160, 200};
  report->add_option("--times", report_times_ns,
                     "Storage times for the lifetime rows, ns")
      ->delimiter(',');
  auto* lint = app.add_subcommand("lint-presets",
                                  "Check preset provenance completeness");

  // Let --scenario/--out/--jobs appear after the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const auto t0 = std::chrono::steady_clock::now();

  try {
    if (lint->parsed()) {
      auto problems = flame::lint_presets();
      for (const auto& p : problems) std::cerr << p << "\n";
      std::cout << (problems.empty() ? "presets clean" : "presets dirty")
                << " (" << flame::preset_names().size() << " presets)\n";
      return problems.empty() ? 0 : 1;
    }
    if (fit->parsed()) {
      ScenarioConfig empty;
      json results = fit_results(data_path, args.out);
      finish_run("fit --data " + data_path, empty, results, args.out,
                 now_seconds(t0));
      std::cout << results.dump(2) << "\n";
      return results["converged"].get<bool>() ? 0 : 1;
    }
    if (report->parsed()) {
      if (!compare.empty() && compare != "flame1")
        throw flame::validation_error("--compare",
                                      "only 'flame1' is available");
      ScenarioConfig empty;
      json results =
          report_results(args, compare == "flame1", report_times_ns);
      finish_run("report", empty, results, args.out, now_seconds(t0));
      std::cout << results.dump(2) << "\n";
      return 0;
    }

    ScenarioConfig cfg = flame::load_scenario(args.scenario);
    json results;
    std::string command;
    if (simulate->parsed()) {
      command = "simulate --scenario " + args.scenario;
      results = simulate_results(cfg, args.jobs, args.out);
    } else if (lifetime->parsed()) {
      command = "lifetime --scenario " + args.scenario;
      results = lifetime_results(cfg, args.jobs, times_ns, args.out);
    } else if (sweep->parsed()) {
      command = "sweep --scenario " + args.scenario;
      results = sweep_results(cfg, args.jobs, args.out);
    } else if (budget->parsed()) {
      command = "budget --scenario " + args.scenario;
      results = budget_results(cfg, args.jobs, args.out);
    }
    finish_run(command, cfg, results, args.out, now_seconds(t0));
    std::cout << results.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::error_code ec;
    fs::create_directories(args.out, ec);
    if (!ec) {
      std::ofstream out(fs::path(args.out) / "error.json");
      out << err.dump(2) << "\n";
    }
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}

#include "flame/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flame/analytics.hpp"

namespace flame {

namespace {

using Setter = std::function<void(Scenario&, double)>;

const std::map<std::string, Setter>& parameter_registry() {
  static const std::map<std::string, Setter> registry = {
      {"control.peak_power_w",
       [](Scenario& s, double v) {
         s.control_storage.peak_power = v;
         s.control_retrieval.peak_power = v;
       }},
      {"control.fwhm_ns",
       [](Scenario& s, double v) {
         s.control_storage.fwhm = v * 1e-9;
         s.control_retrieval.fwhm = v * 1e-9;
       }},
      {"signal.fwhm_ns", [](Scenario& s, double v) { s.signal.fwhm = v * 1e-9; }},
      {"signal.mean_photons",
       [](Scenario& s, double v) { s.signal.mean_photons = v; }},
      {"scheme.delta_two_photon_mhz",
       [](Scenario& s, double v) { s.scheme.delta_two_photon = v * 1e6; }},
      {"scheme.delta_signal_mhz",
       [](Scenario& s, double v) { s.scheme.delta_signal = v * 1e6; }},
      {"scheme.omega_dressing_mhz",
       [](Scenario& s, double v) { s.scheme.omega_dressing = v * 1e6; }},
      {"scheme.delta_dressing_mhz",
       [](Scenario& s, double v) { s.scheme.delta_dressing = v * 1e6; }},
      {"timing.storage_control_center_ns",
       [](Scenario& s, double v) { s.timing.storage_control_center = v * 1e-9; }},
      {"timing.storage_time_ns",
       [](Scenario& s, double v) { s.timing.storage_time = v * 1e-9; }},
      {"timing.signal_center_ns",
       [](Scenario& s, double v) { s.timing.signal_center = v * 1e-9; }},
      {"dressing_on",
       [](Scenario& s, double v) { s.dressing_on = v != 0.0; }},
      {"ensemble.optical_depth",
       [](Scenario& s, double v) { s.ensemble.optical_depth = v; }},
      {"ensemble.temperature_k",
       [](Scenario& s, double v) { s.ensemble.temperature = v; }},
  };
  return registry;
}

double golden_ratio_conjugate() { return 0.6180339887498949; }

}  // namespace

std::vector<std::string> scenario_parameter_paths() {
  std::vector<std::string> out;
  for (const auto& [k, v] : parameter_registry()) out.push_back(k);
  return out;
}

void set_scenario_parameter(Scenario& scenario, const std::string& path,
                            double value) {
  const auto& reg = parameter_registry();
  auto it = reg.find(path);
  if (it == reg.end())
    throw validation_error(path, "unknown scenario parameter path");
  it->second(scenario, value);
}

double evaluate_objective(const Scenario& scenario, Objective objective,
                          unsigned jobs) {
  const double eta = run_storage_retrieval(scenario, jobs).eta_internal;
  if (objective == Objective::eta_internal) return eta;
  return end_to_end_efficiency(std::clamp(eta, 0.0, 1.0), scenario.budget,
                               scenario.off_resonant());
}

std::vector<SweepPoint> scan(const SweepSpec& spec, unsigned jobs) {
  if (spec.axes.empty())
    throw validation_error("sweep.axes", "must be non-empty");
  for (const auto& ax : spec.axes)
    if (ax.values.empty())
      throw validation_error("sweep.axes", "axis '" + ax.path +
                                               "' has no values");

  std::vector<std::size_t> idx(spec.axes.size(), 0);
  std::vector<SweepPoint> table;
  bool done = false;
  while (!done) {
    SweepPoint point;
    Scenario sc = spec.scenario;
    try {
      for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const double v = spec.axes[a].values[idx[a]];
        point.parameters[spec.axes[a].path] = v;
        set_scenario_parameter(sc, spec.axes[a].path, v);
      }
      if (spec.reoptimize.empty()) {
        point.objective = evaluate_objective(sc, spec.objective, jobs);
      } else {
        auto res = optimize(sc, spec.reoptimize, spec.objective,
                            spec.reoptimize_iterations, 1, jobs);
        point.objective = res.best_objective;
        for (const auto& [k, v] : res.best_parameters)
          point.parameters["opt:" + k] = v;
      }
    } catch (const std::exception& e) {
      point.failed = true;
      point.error = e.what();
    }
    table.push_back(std::move(point));

    // Advance the cartesian index, last axis fastest.
    done = true;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      if (++idx[a] < spec.axes[a].values.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  return table;
}

OptimizationResult optimize_function(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<ContinuousAxis>& axes, int iterations_per_axis,
    int coordinate_sweeps) {
  if (axes.empty())
    throw validation_error("optimize.axes", "must be non-empty");
  for (const auto& ax : axes)
    if (!(ax.upper > ax.lower))
      throw validation_error("optimize.axes",
                             "axis '" + ax.path + "' has an empty range");

  OptimizationResult result;
  std::vector<double> x(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a)
    x[a] = 0.5 * (axes[a].lower + axes[a].upper);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_x = x;
  auto eval = [&](const std::vector<double>& xs) {
    const double v = objective(xs);
    SweepPoint pt;
    for (std::size_t a = 0; a < axes.size(); ++a)
      pt.parameters[axes[a].path] = xs[a];
    pt.objective = v;
    result.trace.push_back(std::move(pt));
    if (v > best) {
      best = v;
      best_x = xs;
    }
    return v;
  };

  const int coarse = 5;
  bool all_tight = true;
  for (int sweep = 0; sweep < coordinate_sweeps; ++sweep) {
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double lo = axes[a].lower, hi = axes[a].upper;
      // Coarse pass brackets the maximum before golden-section refinement.
      double cbest = -std::numeric_limits<double>::infinity();
      int cbest_i = 0;
      for (int i = 0; i < coarse; ++i) {
        auto xs = x;
        xs[a] = lo + (hi - lo) * i / (coarse - 1);
        const double v = eval(xs);
        if (v > cbest) {
          cbest = v;
          cbest_i = i;
        }
      }
      double left = lo + (hi - lo) * std::max(cbest_i - 1, 0) / (coarse - 1);
      double right =
          lo + (hi - lo) * std::min(cbest_i + 1, coarse - 1) / (coarse - 1);
      const double gr = golden_ratio_conjugate();
      double x1 = right - gr * (right - left);
      double x2 = left + gr * (right - left);
      auto xs1 = x, xs2 = x;
      xs1[a] = x1;
      xs2[a] = x2;
      double f1 = eval(xs1), f2 = eval(xs2);
      for (int it = coarse + 2; it < iterations_per_axis; ++it) {
        if (f1 < f2) {
          left = x1;
          x1 = x2;
          f1 = f2;
          x2 = left + gr * (right - left);
          auto xs = x;
          xs[a] = x2;
          f2 = eval(xs);
        } else {
          right = x2;
          x2 = x1;
          f2 = f1;
          x1 = right - gr * (right - left);
          auto xs = x;
          xs[a] = x1;
          f1 = eval(xs);
        }
      }
      x[a] = f1 > f2 ? x1 : x2;
      if ((right - left) > 1e-3 * (hi - lo)) all_tight = false;
      // Continue the sweep from the best point seen so far.
      x = best_x;
    }
  }
  result.best_parameters.clear();
  for (std::size_t a = 0; a < axes.size(); ++a)
    result.best_parameters[axes[a].path] = best_x[a];
  result.best_objective = best;
  result.converged = all_tight;
  return result;
}

OptimizationResult optimize(const Scenario& scenario,
                            const std::vector<ContinuousAxis>& axes,
                            Objective objective, int iterations_per_axis,
                            int coordinate_sweeps, unsigned jobs) {
  auto fn = [&](const std::vector<double>& xs) {
    Scenario sc = scenario;
    for (std::size_t a = 0; a < axes.size(); ++a)
      set_scenario_parameter(sc, axes[a].path, xs[a]);
    return evaluate_objective(sc, objective, jobs);
  };
  return optimize_function(fn, axes, iterations_per_axis, coordinate_sweeps);
}

}  // namespace flame

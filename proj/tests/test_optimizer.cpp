#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "flame/config.hpp"
#include "flame/optimizer.hpp"

using namespace flame;

namespace {

// Small, fast scenario for scan tests.
Scenario cheap_scenario() {
  Scenario sc = load_scenario("flame2_on_res").scenario;
  sc.solver.n_z = 16;
  sc.solver.n_v = 4;
  sc.solver.dt = 40e-12;
  sc.timing.storage_time = 8e-9;
  return sc;
}

}  // namespace

TEST_CASE("parameter registry") {
  Scenario sc = cheap_scenario();
  set_scenario_parameter(sc, "control.peak_power_w", 0.7);
  CHECK(sc.control_storage.peak_power == doctest::Approx(0.7));
  CHECK(sc.control_retrieval.peak_power == doctest::Approx(0.7));
  set_scenario_parameter(sc, "scheme.delta_two_photon_mhz", -12.0);
  CHECK(sc.scheme.delta_two_photon == doctest::Approx(-12e6));
  set_scenario_parameter(sc, "timing.storage_time_ns", 42.0);
  CHECK(sc.timing.storage_time == doctest::Approx(42e-9));
  set_scenario_parameter(sc, "dressing_on", 0.0);
  CHECK_FALSE(sc.dressing_on);
  CHECK_THROWS_AS(set_scenario_parameter(sc, "no.such.path", 1.0),
                  validation_error);
  // Every advertised path is settable.
  for (const auto& path : scenario_parameter_paths())
    CHECK_NOTHROW(set_scenario_parameter(sc, path, 1.0));
}

TEST_CASE("coordinate search maximizes a concave quadratic") {
  auto f = [](const std::vector<double>& x) {
    return 3.0 - (x[0] - 0.3) * (x[0] - 0.3) - (x[1] + 0.2) * (x[1] + 0.2);
  };
  std::vector<ContinuousAxis> axes{{"x", -1.0, 1.0}, {"y", -1.0, 1.0}};
  const auto res = optimize_function(f, axes, 40, 3);
  CHECK(res.best_parameters.at("x") == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(res.best_parameters.at("y") == doctest::Approx(-0.2).epsilon(1e-4));
  CHECK(res.best_objective == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(res.converged);
}

TEST_CASE("axis order does not change the optimum of a separable objective") {
  auto f = [](const std::vector<double>& x) {
    return -std::pow(x[0] - 0.6, 2) - std::pow(x[1] - 0.1, 2);
  };
  auto g = [](const std::vector<double>& x) {
    return -std::pow(x[1] - 0.6, 2) - std::pow(x[0] - 0.1, 2);
  };
  std::vector<ContinuousAxis> ab{{"a", 0.0, 1.0}, {"b", 0.0, 1.0}};
  const auto r1 = optimize_function(f, ab, 30, 2);
  const auto r2 = optimize_function(g, ab, 30, 2);
  CHECK(r1.best_parameters.at("a") ==
        doctest::Approx(r2.best_parameters.at("b")).epsilon(1e-6));
  CHECK(r1.best_objective == doctest::Approx(r2.best_objective).epsilon(1e-9));
}

TEST_CASE("trace maximum equals the reported best") {
  auto f = [](const std::vector<double>& x) {
    return -std::abs(x[0] - 0.25);
  };
  std::vector<ContinuousAxis> axes{{"x", 0.0, 1.0}};
  const auto res = optimize_function(f, axes, 20, 2);
  double best = -1e300;
  for (const auto& pt : res.trace) best = std::max(best, pt.objective);
  CHECK(res.best_objective == best);
}

TEST_CASE("scan walks the cartesian grid, last axis fastest") {
  SweepSpec spec;
  spec.scenario = cheap_scenario();
  spec.axes.push_back({"timing.storage_time_ns", {6.0, 10.0}});
  spec.axes.push_back({"control.peak_power_w", {0.7, 1.4}});
  const auto points = scan(spec, 0);
  REQUIRE(points.size() == 4);
  CHECK(points[0].parameters.at("timing.storage_time_ns") == 6.0);
  CHECK(points[0].parameters.at("control.peak_power_w") == 0.7);
  CHECK(points[1].parameters.at("timing.storage_time_ns") == 6.0);
  CHECK(points[1].parameters.at("control.peak_power_w") == 1.4);
  CHECK(points[2].parameters.at("timing.storage_time_ns") == 10.0);
  for (const auto& pt : points) {
    CHECK_FALSE(pt.failed);
    CHECK(pt.objective >= 0.0);
    CHECK(pt.objective <= 1.0);
  }
  // More control power stores more at these settings.
  CHECK(points[1].objective > points[0].objective);
}

TEST_CASE("scan records failures and continues") {
  SweepSpec spec;
  spec.scenario = cheap_scenario();
  spec.axes.push_back({"ensemble.optical_depth", {5.0, -1.0, 8.0}});
  const auto points = scan(spec, 0);
  REQUIRE(points.size() == 3);
  CHECK_FALSE(points[0].failed);
  CHECK(points[1].failed);
  CHECK_FALSE(points[2].failed);
  CHECK(points[1].error.find("optical_depth") != std::string::npos);
}

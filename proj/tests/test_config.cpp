#include <string>

#include "doctest.h"
#include "flame/config.hpp"
#include "flame/presets.hpp"

using namespace flame;

TEST_CASE("preset library") {
  CHECK(preset_names().size() == 4);
  CHECK(is_preset("flame2_on_res"));
  CHECK_FALSE(is_preset("not_a_preset"));
  CHECK_THROWS(preset_json("not_a_preset"));
  CHECK(lint_presets().empty());
}

TEST_CASE("loading the published operating point") {
  const auto cfg = load_scenario("flame2_on_res");
  const auto& sc = cfg.scenario;
  CHECK(sc.ensemble.optical_depth == doctest::Approx(19.0));
  CHECK(sc.scheme.omega_control_peak == doctest::Approx(640e6));
  CHECK(sc.scheme.delta_signal == doctest::Approx(0.0));
  CHECK(sc.scheme.delta_two_photon == doctest::Approx(-50e6));
  CHECK(sc.scheme.delta_dressing == doctest::Approx(-570e6));
  CHECK(sc.scheme.omega_dressing == doctest::Approx(30e6));
  CHECK(sc.ensemble.cell_length == doctest::Approx(0.025));
  CHECK(sc.ensemble.temperature == doctest::Approx(338.15));
  CHECK(sc.signal.fwhm == doctest::Approx(2e-9));
  CHECK(sc.control_storage.fwhm == doctest::Approx(4e-9));
  CHECK(sc.dressing_on);
  CHECK_FALSE(sc.off_resonant());
  CHECK(cfg.reference_eta_int.value() == doctest::Approx(0.526));

  const auto off = load_scenario("flame2_off_res");
  CHECK(off.scenario.scheme.delta_signal == doctest::Approx(1.1e9));
  CHECK(off.scenario.off_resonant());
  CHECK(off.scenario.control_storage.fwhm == doctest::Approx(3e-9));

  CHECK_FALSE(load_scenario("flame2_no_dressing").scenario.dressing_on);
}

TEST_CASE("unit suffix conversion") {
  const std::string text = R"({
    "scheme": {"delta_signal_ghz": 1.1, "omega_control_peak_hz": 640e6},
    "ensemble": {"temperature_c": 65.0, "cell_length_mm": 25.0},
    "signal": {"fwhm_ps": 2000.0}
  })";
  const auto cfg = parse_scenario(text);
  CHECK(cfg.scenario.scheme.delta_signal == doctest::Approx(1.1e9));
  CHECK(cfg.scenario.scheme.omega_control_peak == doctest::Approx(640e6));
  CHECK(cfg.scenario.ensemble.temperature == doctest::Approx(338.15));
  CHECK(cfg.scenario.ensemble.cell_length == doctest::Approx(0.025));
  CHECK(cfg.scenario.signal.fwhm == doctest::Approx(2e-9));
}

TEST_CASE("one field given in two units is rejected") {
  const std::string text = R"({
    "signal": {"fwhm_ns": 2.0, "fwhm_ps": 2000.0}
  })";
  CHECK_THROWS_AS(parse_scenario(text), validation_error);
}

TEST_CASE("unknown keys are rejected") {
  try {
    parse_scenario(R"({"signal": {"fhwm_ns": 2.0}})", "typo.json");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(e.field() == "signal.fhwm_ns");
    CHECK(std::string(e.what()).find("typo.json") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario(R"({"solvr": {}})"), validation_error);
}

TEST_CASE("invalid values name the field") {
  try {
    parse_scenario(R"({"ensemble": {"optical_depth": -1.0}})");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(e.field() == "optical_depth");
  }
}

TEST_CASE("parse errors carry line information") {
  try {
    parse_scenario("{\n  \"signal\": {\n  oops\n}\n}", "broken.json");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("save/load round trip is a fixed point") {
  for (const auto& name : preset_names()) {
    const auto cfg = load_scenario(name);
    const std::string canonical = save_scenario(cfg);
    const auto reloaded = parse_scenario(canonical, name + ":canonical");
    CHECK(save_scenario(reloaded) == canonical);
  }
}

TEST_CASE("timing plan drives the pulse centers") {
  const auto cfg = load_scenario("flame2_on_res");
  CHECK(cfg.scenario.signal.center ==
        doctest::Approx(cfg.scenario.timing.signal_center));
  CHECK(cfg.scenario.control_storage.center ==
        doctest::Approx(cfg.scenario.timing.storage_control_center));
  CHECK(cfg.scenario.control_retrieval.center ==
        doctest::Approx(cfg.scenario.timing.retrieval_control_center()));
}

TEST_CASE("sweep block parsing") {
  const std::string text = R"({
    "sweep": {
      "axes": [{"path": "control.peak_power_w",
                "values": [0.2, 0.8, 1.4]}],
      "objective": "eta_e2e",
      "reoptimize": [{"path": "timing.storage_control_center_ns",
                      "lower": -2.0, "upper": 0.5}],
      "reoptimize_iterations": 12
    }
  })";
  const auto cfg = parse_scenario(text);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->axes.size() == 1);
  CHECK(cfg.sweep->axes[0].values.size() == 3);
  CHECK(cfg.sweep->objective == Objective::eta_e2e);
  REQUIRE(cfg.sweep->reoptimize.size() == 1);
  CHECK(cfg.sweep->reoptimize[0].lower == doctest::Approx(-2.0));
  CHECK(cfg.sweep->reoptimize_iterations == 12);
}

TEST_CASE("missing file is reported") {
  CHECK_THROWS_AS(load_scenario("/no/such/file.json"), validation_error);
}

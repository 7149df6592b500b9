#include <cmath>
#include <vector>

#include "doctest.h"
#include "flame/pulse_shaping.hpp"

using namespace flame;

namespace {

// Trapezoid integral of |envelope|^2.
double intensity_integral(const SignalPulse& p, double t0, double t1,
                          std::size_t n) {
  const double dt = (t1 - t0) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double a = signal_envelope(p, t0 + dt * i);
    sum += (i == 0 || i == n ? 0.5 : 1.0) * a * a;
  }
  return sum * dt;
}

// Width between half-maximum crossings, by bisection on each side.
double measured_fwhm(const std::vector<double>& t,
                     const std::vector<double>& y) {
  double peak = 0.0;
  std::size_t ip = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] > peak) peak = y[i], ip = i;
  double left = t.front(), right = t.back();
  for (std::size_t i = 0; i < ip; ++i)
    if (y[i] < peak / 2 && y[i + 1] >= peak / 2) {
      const double f = (peak / 2 - y[i]) / (y[i + 1] - y[i]);
      left = t[i] + f * (t[i + 1] - t[i]);
    }
  for (std::size_t i = ip; i + 1 < y.size(); ++i)
    if (y[i] >= peak / 2 && y[i + 1] < peak / 2) {
      const double f = (y[i] - peak / 2) / (y[i] - y[i + 1]);
      right = t[i] + f * (t[i + 1] - t[i]);
    }
  return right - left;
}

}  // namespace

TEST_CASE("signal pulse normalization and width") {
  SignalPulse p;
  p.fwhm = 2e-9;
  p.center = 0.0;
  p.mean_photons = 0.1;
  CHECK(intensity_integral(p, -20e-9, 20e-9, 40000) ==
        doctest::Approx(0.1).epsilon(1e-4));

  std::vector<double> t, y;
  for (int i = -4000; i <= 4000; ++i) {
    t.push_back(i * 1e-12);
    const double a = signal_envelope(p, t.back());
    y.push_back(a * a);
  }
  CHECK(measured_fwhm(t, y) == doctest::Approx(2e-9).epsilon(1e-3));
}

TEST_CASE("signal pulse translation invariance") {
  SignalPulse a, b;
  a.center = 0.0;
  b.center = 7.3e-9;
  for (double dt : {-2e-9, 0.0, 0.5e-9, 3e-9})
    CHECK(signal_envelope(a, dt) ==
          doctest::Approx(signal_envelope(b, b.center + dt)).epsilon(1e-12));
}

TEST_CASE("signal photon-number scaling") {
  SignalPulse p;
  p.mean_photons = 0.4;
  SignalPulse q = p;
  q.mean_photons = 0.1;
  CHECK(signal_envelope(p, 0.3e-9) ==
        doctest::Approx(2.0 * signal_envelope(q, 0.3e-9)).epsilon(1e-12));
}

TEST_CASE("control pulse plateau and floor") {
  ControlPulse c;
  c.fwhm = 6e-9;
  c.center = 0.0;
  // erf edges leave a ~1e-5 deficit at the nominal peak.
  CHECK(control_intensity_profile(c, 0.0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(control_intensity_profile(c, 40e-9) ==
        doctest::Approx(1.0 / 800.0).epsilon(0.01));
  CHECK(control_intensity_profile(c, -40e-9) ==
        doctest::Approx(1.0 / 800.0).epsilon(0.01));
}

TEST_CASE("control pulse 10-90 edge time") {
  ControlPulse c;
  c.fwhm = 8e-9;
  c.center = 0.0;
  c.rise_fall_10_90 = 1.2e-9;
  // Scan the rising edge for the 10% and 90% crossings.
  double t10 = 0, t90 = 0;
  double prev = control_intensity_profile(c, -10e-9);
  for (double t = -10e-9; t < 0; t += 1e-13) {
    const double cur = control_intensity_profile(c, t);
    if (prev < 0.1 && cur >= 0.1) t10 = t;
    if (prev < 0.9 && cur >= 0.9) t90 = t;
    prev = cur;
  }
  CHECK(t90 - t10 == doctest::Approx(1.2e-9).epsilon(0.05));
}

TEST_CASE("control envelope Rabi calibration") {
  ControlPulse c;
  c.fwhm = 6e-9;
  c.center = 0.0;
  c.peak_power = 1.4;
  CHECK(control_envelope(c, 0.0, 640e6, 1.4) ==
        doctest::Approx(640e6).epsilon(1e-6));
  // Rabi frequency scales as sqrt(power): 0.35 W -> 320 MHz.
  c.peak_power = 0.35;
  CHECK(control_envelope(c, 0.0, 640e6, 1.4) ==
        doctest::Approx(320e6).epsilon(1e-6));
}

TEST_CASE("infeasible pulse shapes are rejected") {
  ControlPulse c;
  c.fwhm = 2e-9;
  c.rise_fall_10_90 = 1.2e-9;  // edges longer than the pulse
  CHECK_THROWS_AS(c.validate(), infeasible_pulse_error);
  SignalPulse s;
  s.fwhm = -1e-9;
  CHECK_THROWS_AS(s.validate(), validation_error);
  s.fwhm = 2e-9;
  s.mean_photons = -0.1;
  CHECK_THROWS_AS(s.validate(), validation_error);
}

TEST_CASE("after-pulse replica") {
  ControlPulse c;
  c.fwhm = 4e-9;
  c.center = 0.0;
  c.after_pulse_fraction = 0.04;
  c.after_pulse_delay = 30e-9;
  CHECK(control_intensity_profile(c, 30e-9) ==
        doctest::Approx(0.04).epsilon(0.01));
  // erf edges leave a ~1e-5 deficit at the nominal peak.
  CHECK(control_intensity_profile(c, 0.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("fractional delay") {
  CHECK(effective_fractional_delay(108e-9, 2e-9) ==
        doctest::Approx(54.0).epsilon(1e-12));
}

TEST_CASE("timing plan") {
  TimingPlan tm;
  tm.storage_control_center = -0.6e-9;
  tm.storage_time = 20e-9;
  CHECK(tm.retrieval_control_center() == doctest::Approx(19.4e-9));
  tm.storage_time = -5e-9;
  CHECK_THROWS_AS(tm.validate(), validation_error);
}

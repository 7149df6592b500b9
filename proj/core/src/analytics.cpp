#include "flame/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace flame {

namespace {

// Solve the 3x3 system M x = rhs in place; returns false when singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs,
            std::array<double, 3>& x) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-300) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < 3; ++c) s -= m[r][c] * x[c];
    x[r] = s / m[r][r];
  }
  return true;
}

bool invert3(const std::array<std::array<double, 3>, 3>& m,
             std::array<std::array<double, 3>, 3>& inv) {
  for (int k = 0; k < 3; ++k) {
    std::array<double, 3> e{0, 0, 0};
    e[k] = 1.0;
    std::array<double, 3> col{};
    if (!solve3(m, e, col)) return false;
    for (int r = 0; r < 3; ++r) inv[r][k] = col[r];
  }
  return true;
}

}  // namespace

double decay_model(double t, double eta0, double tau_sigma, double tau_gamma) {
  double exponent = 0.0;
  if (std::isfinite(tau_sigma))
    exponent += t * t / (2.0 * tau_sigma * tau_sigma);
  if (std::isfinite(tau_gamma)) exponent += t / tau_gamma;
  return eta0 * std::exp(-exponent);
}

double lifetime_1e(double tau_sigma, double tau_gamma) {
  const double a =
      std::isfinite(tau_sigma) ? 1.0 / (2.0 * tau_sigma * tau_sigma) : 0.0;
  const double b = std::isfinite(tau_gamma) ? 1.0 / tau_gamma : 0.0;
  if (a == 0.0 && b == 0.0)
    throw std::domain_error(
        "lifetime_1e: undefined when both decay channels are infinite");
  // Positive root of a t^2 + b t - 1 = 0, written to avoid cancellation.
  return 2.0 / (b + std::sqrt(b * b + 4.0 * a));
}

DecayFitResult fit_decay(
    const std::vector<std::pair<double, double>>& samples) {
  DecayFitResult out;
  if (samples.size() < 4) {
    out.message = "fit_decay: need at least 4 samples";
    return out;
  }
  std::vector<double> t, y;
  for (const auto& [ti, yi] : samples) {
    t.push_back(ti);
    y.push_back(yi);
  }
  {
    auto ts = t;
    std::sort(ts.begin(), ts.end());
    if (std::adjacent_find(ts.begin(), ts.end()) != ts.end()) {
      out.message = "fit_decay: duplicate sample times";
      return out;
    }
  }
  const double y_max = *std::max_element(y.begin(), y.end());
  if (y_max <= 0) {
    out.message = "fit_decay: all samples non-positive";
    return out;
  }
  const std::size_t n = t.size();

  // Relative weighting (multiplicative noise model), floored to avoid
  // divergent weights on near-zero tails.
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::max(y[i], 1e-3 * y_max);
    w[i] = 1.0 / (s * s);
  }

  // Seed: eta0 from the earliest sample, then linear regression of
  // -ln(y/eta0) against (t^2, t) through the origin.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (t[i] < t[i0]) i0 = i;
  double a = std::max(y[i0], 1e-6 * y_max);
  double b = 0.0, c = 0.0;
  {
    double s22 = 0, s21 = 0, s11 = 0, r2 = 0, r1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] <= 0) continue;
      const double z = -std::log(y[i] / a);
      const double t2 = t[i] * t[i];
      s22 += t2 * t2;
      s21 += t2 * t[i];
      s11 += t2;
      r2 += t2 * z;
      r1 += t[i] * z;
    }
    const double det = s22 * s11 - s21 * s21;
    if (std::abs(det) > 1e-300) {
      b = (r2 * s11 - r1 * s21) / det;
      c = (r1 * s22 - r2 * s21) / det;
    }
    b = std::max(b, 0.0);
    c = std::max(c, 0.0);
  }

  auto model = [](double a_, double b_, double c_, double tt) {
    return a_ * std::exp(-b_ * tt * tt - c_ * tt);
  };
  auto objective = [&](double a_, double b_, double c_) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = model(a_, b_, c_, t[i]) - y[i];
      s += w[i] * r * r;
    }
    return s;
  };

  double chi2 = objective(a, b, c);
  double lambda = 1e-3;
  std::array<std::array<double, 3>, 3> jtj{};
  int iter = 0;
  bool converged = false;
  for (; iter < 200; ++iter) {
    jtj = {};
    std::array<double, 3> jtr{0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const double m = model(a, b, c, t[i]);
      const double r = m - y[i];
      const std::array<double, 3> j{m / a, -t[i] * t[i] * m, -t[i] * m};
      for (int p = 0; p < 3; ++p) {
        jtr[p] += w[i] * j[p] * r;
        for (int q = 0; q < 3; ++q) jtj[p][q] += w[i] * j[p] * j[q];
      }
    }
    auto damped = jtj;
    for (int p = 0; p < 3; ++p)
      damped[p][p] *= (1.0 + lambda);
    std::array<double, 3> step{};
    if (!solve3(damped, {-jtr[0], -jtr[1], -jtr[2]}, step)) {
      out.message = "fit_decay: singular normal equations";
      break;
    }
    double a_new = a + step[0];
    double b_new = std::max(b + step[1], 0.0);
    double c_new = std::max(c + step[2], 0.0);
    if (a_new <= 0) a_new = 0.5 * a;
    const double chi2_new = objective(a_new, b_new, c_new);
    if (chi2_new <= chi2) {
      const double rel =
          std::abs(chi2 - chi2_new) / std::max(chi2, 1e-300);
      const double step_norm = std::abs(step[0] / a) +
                               std::abs(step[1]) * t.back() * t.back() +
                               std::abs(step[2]) * t.back();
      a = a_new;
      b = b_new;
      c = c_new;
      chi2 = chi2_new;
      lambda = std::max(lambda / 3.0, 1e-12);
      if (rel < 1e-14 || step_norm < 1e-12) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) {
        converged = true;  // stuck at a (local) optimum
        break;
      }
    }
  }

  out.eta0 = a;
  out.tau_sigma = b > 0 ? 1.0 / std::sqrt(2.0 * b) : infinite_time;
  out.tau_gamma = c > 0 ? 1.0 / c : infinite_time;
  out.tau_s = lifetime_1e(out.tau_sigma, out.tau_gamma);
  out.iterations = iter;
  out.converged = converged;
  out.residual_norm = std::sqrt(chi2);

  // 1-s.d. uncertainties from the local curvature.
  std::array<std::array<double, 3>, 3> cov{};
  if (n > 3 && invert3(jtj, cov)) {
    const double s2 = chi2 / static_cast<double>(n - 3);
    const double va = std::max(cov[0][0] * s2, 0.0);
    const double vb = std::max(cov[1][1] * s2, 0.0);
    const double vc = std::max(cov[2][2] * s2, 0.0);
    out.eta0_err = std::sqrt(va);
    out.tau_sigma_err =
        (b > 0 && std::isfinite(out.tau_sigma))
            ? std::sqrt(vb) * out.tau_sigma / (2.0 * b)
            : 0.0;
    out.tau_gamma_err =
        (c > 0 && std::isfinite(out.tau_gamma)) ? std::sqrt(vc) / (c * c) : 0.0;
  }
  if (out.message.empty() && !converged)
    out.message = "fit_decay: iteration budget exhausted";
  return out;
}

void HistogramRecord::validate() const {
  if (bin_edges.size() < 2)
    throw validation_error("histogram.bin_edges", "need at least 2 edges");
  if (counts.size() + 1 != bin_edges.size())
    throw validation_error("histogram.counts",
                           "length must be bin_edges.size() - 1");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (bin_edges[i] <= bin_edges[i - 1])
      throw validation_error("histogram.bin_edges", "must be increasing");
  for (double cnt : counts)
    if (cnt < 0)
      throw validation_error("histogram.counts", "must be non-negative");
}

double HistogramRecord::counts_in_window(double a, double b) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double lo = std::max(a, bin_edges[i]);
    const double hi = std::min(b, bin_edges[i + 1]);
    if (hi <= lo) continue;
    const double width = bin_edges[i + 1] - bin_edges[i];
    sum += counts[i] * (hi - lo) / width;
  }
  return sum;
}

double efficiency_from_histograms(const HistogramRecord& reference,
                                  const HistogramRecord& retrieved,
                                  double window_start, double window,
                                  std::optional<double> retrieved_window_start) {
  reference.validate();
  retrieved.validate();
  if (window <= 0)
    throw validation_error("window", "must be > 0");
  const double ret_start = retrieved_window_start.value_or(window_start);
  const double ref_counts =
      reference.counts_in_window(window_start, window_start + window);
  if (ref_counts <= 0)
    throw std::domain_error(
        "efficiency_from_histograms: empty reference window [" +
        std::to_string(window_start) + ", " +
        std::to_string(window_start + window) + "]");
  return retrieved.counts_in_window(ret_start, ret_start + window) /
         ref_counts;
}

HistogramRecord histogram_from_text(const std::string& text,
                                    HistogramRole role) {
  std::vector<double> centers, counts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    for (auto& ch : line)
      if (ch == ',' || ch == '\t' || ch == ';') ch = ' ';
    std::istringstream row(line);
    double t_ns, cnt;
    if (!(row >> t_ns)) continue;  // header / blank line
    if (!(row >> cnt)) continue;
    centers.push_back(t_ns * 1e-9);
    counts.push_back(cnt);
  }
  HistogramRecord rec;
  rec.role = role;
  rec.counts = std::move(counts);
  if (centers.size() < 2)
    throw validation_error("histogram", "need at least 2 rows");
  const double dt = centers[1] - centers[0];
  rec.bin_edges.resize(centers.size() + 1);
  for (std::size_t i = 0; i < centers.size(); ++i)
    rec.bin_edges[i] = centers[i] - 0.5 * dt;
  rec.bin_edges.back() = centers.back() + 0.5 * dt;
  rec.validate();
  return rec;
}

double end_to_end_efficiency(double eta_int, const TransmissionBudget& budget,
                             bool off_resonant) {
  if (eta_int < 0 || eta_int > 1)
    throw validation_error("eta_int", "must be in [0,1]");
  budget.validate();
  double eta = eta_int * budget.setup_transmission();
  if (off_resonant) eta *= budget.rb85_penalty;
  return eta;
}

void NoiseBudget::validate() const {
  if (nu_pump < 0 || slope_on_res < 0 || slope_off_res < 0)
    throw validation_error("noise_budget", "all terms must be >= 0");
}

double noise_per_pulse(double p_control, bool off_resonant,
                       const NoiseBudget& budget) {
  if (p_control < 0)
    throw validation_error("p_control", "must be >= 0");
  budget.validate();
  return budget.nu_pump +
         (off_resonant ? budget.slope_off_res : budget.slope_on_res) *
             p_control;
}

double mu1_signal_to_noise(double eta_e2e, double nu) {
  if (eta_e2e <= 0)
    throw std::domain_error("mu1_signal_to_noise: eta_e2e must be > 0");
  return nu / eta_e2e;
}

}  // namespace flame

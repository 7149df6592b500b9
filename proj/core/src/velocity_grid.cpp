#include "flame/velocity_grid.hpp"

#include <algorithm>
#include <cmath>

#include "flame/constants.hpp"

namespace flame {

// Newton iteration on the Hermite recurrence; nodes found from the outermost
// inward, seeded with the usual asymptotic guesses.
void gauss_hermite_rule(std::size_t n, std::vector<double>& x,
                        std::vector<double>& w) {
  if (n == 0) throw std::invalid_argument("gauss_hermite_rule: n == 0");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  // Loop above fills x in descending order; flip to ascending.
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  if (n % 2 == 1) x[n / 2] = 0.0;
}

VelocityGrid::VelocityGrid(std::vector<VelocityNode> nodes)
    : nodes_(std::move(nodes)) {
  double sum = 0.0;
  for (const auto& nd : nodes_) {
    if (nd.weight < 0)
      throw validation_error("velocity_grid.weight", "must be >= 0");
    sum += nd.weight;
  }
  if (sum <= 0)
    throw validation_error("velocity_grid", "weights must sum to > 0");
  for (auto& nd : nodes_) nd.weight /= sum;
}

VelocityGrid VelocityGrid::gauss_hermite(std::size_t n, double sigma_v) {
  if (n == 0) throw validation_error("velocity_grid.n", "must be > 0");
  if (sigma_v <= 0)
    throw validation_error("velocity_grid.sigma_v", "must be > 0");
  std::vector<double> x, w;
  gauss_hermite_rule(n, x, w);
  std::vector<VelocityNode> nodes(n);
  // v = sqrt(2) sigma x maps exp(-x^2) onto the Maxwellian; weights
  // normalize to 1 through the constructor.
  for (std::size_t i = 0; i < n; ++i)
    nodes[i] = {std::sqrt(2.0) * sigma_v * x[i], w[i]};
  return VelocityGrid(std::move(nodes));
}

VelocityGrid VelocityGrid::uniform(std::size_t n, double sigma_v, double span) {
  if (n < 2) throw std::invalid_argument("VelocityGrid::uniform: n < 2");
  std::vector<VelocityNode> nodes(n);
  const double vmax = span * sigma_v;
  const double dv = 2.0 * vmax / (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = -vmax + i * dv;
    const double trap = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    const double maxwell =
        sigma_v > 0 ? std::exp(-v * v / (2.0 * sigma_v * sigma_v)) : 1.0;
    nodes[i] = {v, trap * maxwell};
  }
  return VelocityGrid(std::move(nodes));
}

VelocityGrid VelocityGrid::custom(std::vector<VelocityNode> nodes) {
  return VelocityGrid(std::move(nodes));
}

}  // namespace flame

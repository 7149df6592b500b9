#pragma once

#include <cstddef>
#include <vector>

#include "flame/errors.hpp"

namespace flame {

enum class VelocityGridKind { gauss_hermite, uniform, custom };

struct VelocityNode {
  double velocity = 0.0;  // m/s
  double weight = 0.0;    // Maxwellian quadrature weight
};

/// Quadrature over the 1-D Maxwell velocity distribution.  Weights are
/// non-negative and sum to 1; nodes are symmetric about 0.
class VelocityGrid {
 public:
  /// Gauss-Hermite quadrature against exp(-v^2/(2 sigma^2)).
  static VelocityGrid gauss_hermite(std::size_t n, double sigma_v);
  /// Uniform trapezoid grid over [-span*sigma, +span*sigma].
  static VelocityGrid uniform(std::size_t n, double sigma_v, double span = 4.0);
  /// Explicit nodes (weights renormalized to sum 1).
  static VelocityGrid custom(std::vector<VelocityNode> nodes);

  const std::vector<VelocityNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  explicit VelocityGrid(std::vector<VelocityNode> nodes);
  std::vector<VelocityNode> nodes_;
};

/// Nodes and weights of n-point Gauss-Hermite quadrature for
/// integral f(x) exp(-x^2) dx (physicists' convention).
void gauss_hermite_rule(std::size_t n, std::vector<double>& x,
                        std::vector<double>& w);

}  // namespace flame

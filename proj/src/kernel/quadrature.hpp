#pragma once

#include <memory>
#include <span>
#include <vector>

namespace dtm {

/// Convergence target for a transform: accept when |estimate error| <= max(relative * |value|, absolute).
struct ErrorTarget {
  double relative = 1e-10;
  double absolute = 1e-15;

  bool accepts(double error, double magnitude) const noexcept;
};

/// Generalized Gauss-Laguerre rule for the normalized weight u^{n-1} e^{-u} / (n-1)!.
/// Weights are stored normalized, so they sum to 1 rather than (n-1)!.
/// Exact for polynomials of degree <= 2M - 1.
class QuadratureRule {
 public:
  QuadratureRule(int shape, int node_count, ErrorTarget target = {});

  /// max(32, ceil(4 sqrt(n))).
  static int default_node_count(int shape) noexcept;

  int shape() const noexcept { return shape_; }
  int size() const noexcept { return static_cast<int>(nodes_->size()); }
  const ErrorTarget& target() const noexcept { return target_; }
  std::span<const double> nodes() const noexcept { return *nodes_; }
  std::span<const double> weights() const noexcept { return *weights_; }

  /// Same shape with twice the nodes; used for the doubling error estimate.
  QuadratureRule doubled() const;

 private:
  int shape_;
  ErrorTarget target_;
  std::shared_ptr<const std::vector<double>> nodes_;
  std::shared_ptr<const std::vector<double>> weights_;
};

}  // namespace dtm

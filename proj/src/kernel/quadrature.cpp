#include "kernel/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "common/error.hpp"

namespace dtm {
namespace {

struct RuleData {
  std::shared_ptr<const std::vector<double>> nodes;
  std::shared_ptr<const std::vector<double>> weights;
};

// Orthonormal recurrence for the Laguerre weight at x: returns p_M(x) / p_M'(x) and
// log(sum_{j<M} p_j(x)^2). Values are rescaled on the fly so large nodes do not overflow.
struct RecurrenceValue {
  double newton_step;
  double log_christoffel;
};

RecurrenceValue orthonormal_recurrence(double x, double a, int m) {
  constexpr double kBig = 1e150;
  constexpr double kShrink = 1e-150;
  double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int j = 0; j < m; ++j) {
    const double alpha = 2.0 * j + a + 1.0;
    const double beta = std::sqrt(j * (j + a));
    const double beta_next = std::sqrt((j + 1.0) * (j + 1.0 + a));
    const double p_next = ((x - alpha) * p - beta * p_prev) / beta_next;
    const double d_next = ((x - alpha) * d + p - beta * d_prev) / beta_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    if (j + 1 < m) sum += p * p;
    if (std::abs(p) > kBig || std::abs(d) > kBig) {
      p *= kShrink;
      p_prev *= kShrink;
      d *= kShrink;
      d_prev *= kShrink;
      sum *= kShrink * kShrink;
      log_scale -= std::log(kShrink);
    }
  }
  return {p / d, std::log(sum) + 2.0 * log_scale};
}

// Nodes are eigenvalues of the Jacobi matrix (Golub-Welsch), polished by Newton on the
// recurrence; weights are Christoffel numbers 1 / sum p_j(u_k)^2, normalized to sum 1.
RuleData build_rule(int shape, int node_count) {
  const double a = shape - 1.0;
  Eigen::VectorXd diag(node_count);
  Eigen::VectorXd sub(std::max(node_count - 1, 0));
  for (int k = 0; k < node_count; ++k) diag[k] = 2.0 * k + a + 1.0;
  for (int k = 1; k < node_count; ++k) sub[k - 1] = std::sqrt(k * (k + a));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::QuadratureNotConverged,
         "Gauss-Laguerre eigensolver failed for shape " + num(shape));
  }

  auto nodes = std::make_shared<std::vector<double>>(node_count);
  auto weights = std::make_shared<std::vector<double>>(node_count);
  for (int k = 0; k < node_count; ++k) {
    double x = solver.eigenvalues()[k];
    for (int it = 0; it < 2; ++it) {
      const double step = orthonormal_recurrence(x, a, node_count).newton_step;
      if (std::isfinite(step) && std::abs(step) < 1e-6 * std::max(1.0, x)) x -= step;
    }
    (*nodes)[k] = x;
    (*weights)[k] = std::exp(-orthonormal_recurrence(x, a, node_count).log_christoffel);
  }
  return {std::move(nodes), std::move(weights)};
}

RuleData cached_rule(int shape, int node_count) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, RuleData> cache;
  const auto key = std::make_pair(shape, node_count);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  RuleData data = build_rule(shape, node_count);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(data)).first->second;
}

}  // namespace

bool ErrorTarget::accepts(double error, double magnitude) const noexcept {
  return error <= std::max(relative * magnitude, absolute);
}

QuadratureRule::QuadratureRule(int shape, int node_count, ErrorTarget target)
    : shape_(shape), target_(target) {
  require(shape >= 1, "QuadratureRule: shape must be >= 1");
  require(node_count >= 1 && node_count <= 4096, "QuadratureRule: node count must be in [1, 4096]");
  RuleData data = cached_rule(shape, node_count);
  nodes_ = std::move(data.nodes);
  weights_ = std::move(data.weights);
}

int QuadratureRule::default_node_count(int shape) noexcept {
  return std::max(32, static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(shape)))));
}

QuadratureRule QuadratureRule::doubled() const { return QuadratureRule(shape_, 2 * size(), target_); }

}  // namespace dtm

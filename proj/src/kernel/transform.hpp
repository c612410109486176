#pragma once

#include <complex>
#include <cstdint>
#include <cstddef>

#include "kernel/gamma_kernel.hpp"
#include "kernel/quadrature.hpp"
#include "kernel/signal.hpp"

namespace dtm {

struct QuadratureOptions {
  int node_count = 0;  ///< 0 selects QuadratureRule::default_node_count(n).
  ErrorTarget target{};
  bool allow_contour_rotation = true;
  bool allow_panel_fallback = true;
};

enum class TransformPath { Identity, RotatedRay, GaussLaguerre, AdaptivePanels };

const char* transform_path_name(TransformPath path) noexcept;

struct TransformResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  TransformPath path = TransformPath::GaussLaguerre;
  int nodes = 0;  ///< Nodes of the finer rule, or function evaluations for panels.
};

struct MonteCarloResult {
  std::complex<double> estimate;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// (1/(n-1)!) * integral_0^inf u^{n-1} e^{-u} F(tau u) du.
///
/// Tries, in order: a rotated-contour Gauss-Laguerre rule when the signal has an
/// analytic continuation with a stable logarithmic derivative; the real-axis
/// rule checked against its doubling; adaptive panels in the standardized
/// variable. Throws DivergentTransform or QuadratureNotConverged.
TransformResult transform_quadrature(const TimeSignal& signal, const GammaKernel& kernel,
                                     const QuadratureRule& rule,
                                     const QuadratureOptions& options = {});
TransformResult transform_quadrature(const TimeSignal& signal, const GammaKernel& kernel,
                                     const QuadratureOptions& options = {});

/// Same transform with n = 0 meaning the identity (returns F(0)).
TransformResult transform_at_step(const TimeSignal& signal, int steps, double tau,
                                  const QuadratureOptions& options = {});

/// Mean of F(tau U_i) over Gamma(n) draws U_i, reproducible for a given seed.
MonteCarloResult transform_monte_carlo(const TimeSignal& signal, const GammaKernel& kernel,
                                       std::size_t samples, std::uint64_t seed);

/// Throws DivergentTransform when the declared growth rate g has g*tau >= 1, or, without a
/// declaration, when the integrand is still increasing at u = n + 10 sqrt(n) + 50.
void screen_growth(const TimeSignal& signal, const GammaKernel& kernel);

/// Upper end tau*(n + 10 sqrt(n) + 50) of the region a signal must cover.
double effective_support(const GammaKernel& kernel) noexcept;

/// Largest time tau*u_k over the nodes of a rule (and its doubling) carrying
/// normalized weight above weight_floor. Signals with a finite domain must reach this.
double quadrature_support(const GammaKernel& kernel, const QuadratureOptions& options = {},
                          double weight_floor = 1e-16);

}  // namespace dtm

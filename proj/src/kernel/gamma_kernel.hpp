#pragma once

namespace dtm {

/// Step count n and time quantum tau. The n-step discrete state is the
/// continuous history averaged against the Gamma(n) density of internal time.
class GammaKernel {
 public:
  GammaKernel(int steps, double tau);

  int steps() const noexcept { return steps_; }
  double tau() const noexcept { return tau_; }

  /// Mean and variance of the internal time tau * Gamma(n, 1).
  double mean_time() const noexcept { return steps_ * tau_; }
  double time_variance() const noexcept { return steps_ * tau_ * tau_; }

 private:
  int steps_;
  double tau_;
};

/// Mixing weight of the one-step scheme (rho(n+1) - rho(n)) / tau = L[alpha rho(n) + beta rho(n+1)].
class StepScheme {
 public:
  explicit StepScheme(double alpha);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return 1.0 - alpha_; }
  bool is_backward() const noexcept { return alpha_ == 0.0; }

 private:
  double alpha_;
};

/// Density of the internal time xi given its origin xi0; zero for xi <= xi0.
double gamma_density(const GammaKernel& kernel, double xi, double xi0);

/// log of gamma_density, -inf for xi <= xi0. Safe for large n.
double log_gamma_density(const GammaKernel& kernel, double xi, double xi0);

/// log of the normalized kernel weight u^{n-1} e^{-u} / (n-1)! at u > 0.
double log_kernel_weight(int steps, double u);

}  // namespace dtm

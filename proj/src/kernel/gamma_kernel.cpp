#include "kernel/gamma_kernel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "common/error.hpp"

namespace dtm {

GammaKernel::GammaKernel(int steps, double tau) : steps_(steps), tau_(tau) {
  require(steps >= 1, "GammaKernel: step count must be >= 1, got " + num(steps));
  require(std::isfinite(tau) && tau > 0.0, "GammaKernel: tau must be positive and finite");
}

StepScheme::StepScheme(double alpha) : alpha_(alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
          "StepScheme: alpha must lie in [0, 1]");
}

double log_kernel_weight(int steps, double u) {
  if (!(u > 0.0)) return -std::numeric_limits<double>::infinity();
  const double shape_term = steps == 1 ? 0.0 : (steps - 1) * std::log(u);
  return shape_term - u - std::lgamma(static_cast<double>(steps));
}

double log_gamma_density(const GammaKernel& kernel, double xi, double xi0) {
  if (!(xi > xi0)) return -std::numeric_limits<double>::infinity();
  const double u = (xi - xi0) / kernel.tau();
  return log_kernel_weight(kernel.steps(), u) - std::log(kernel.tau());
}

double gamma_density(const GammaKernel& kernel, double xi, double xi0) {
  if (!(xi > xi0)) return 0.0;
  const double u = (xi - xi0) / kernel.tau();
  const int n = kernel.steps();
  if (n <= 170) {
    const double direct = std::pow(u, n - 1) * std::exp(-u) / (std::tgamma(n) * kernel.tau());
    if (std::isfinite(direct) && direct > 0.0) return direct;
  }
  return std::exp(log_gamma_density(kernel, xi, xi0));
}

}  // namespace dtm

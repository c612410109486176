#include "kernel/sampling.hpp"

#include <cmath>

#include "common/error.hpp"

namespace dtm {

double Rng::uniform() noexcept {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::exponential() noexcept { return -std::log1p(-uniform()); }

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = y * scale;
  has_spare_ = true;
  return x * scale;
}

double sample_standard_gamma(int shape, Rng& rng) {
  require(shape >= 1, "sample_standard_gamma: shape must be >= 1");
  if (shape <= 16) {
    double sum = 0.0;
    for (int k = 0; k < shape; ++k) sum += rng.exponential();
    return sum;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_internal_time(const GammaKernel& kernel, Rng& rng) {
  return kernel.tau() * sample_standard_gamma(kernel.steps(), rng);
}

}  // namespace dtm

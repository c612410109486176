#pragma once

#include <cstdint>
#include <random>

#include "kernel/gamma_kernel.hpp"

namespace dtm {

/// Seeded generator whose variate transforms are fixed here rather than left to
/// the standard library, so a seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard exponential, -log(1 - U).
  double exponential() noexcept;
  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Gamma(shape, 1): sum of exponentials for shape <= 16, Marsaglia-Tsang rejection above.
double sample_standard_gamma(int shape, Rng& rng);

/// Internal time t = tau * Gamma(n, 1).
double sample_internal_time(const GammaKernel& kernel, Rng& rng);

}  // namespace dtm

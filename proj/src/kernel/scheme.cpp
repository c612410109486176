#include "kernel/scheme.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "common/error.hpp"

namespace dtm {
namespace {

void require_forward_scheme(const StepScheme& scheme) {
  if (scheme.beta() <= 0.0) {
    fail(ErrorCode::BackwardOnly,
         "alpha = 1 (forward difference) has beta = 0; the scheme only defines backward evolution");
  }
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

// The FFTW planner is not thread-safe; plan creation and destruction are serialized.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

}  // namespace

double scheme_delta_coefficient(const StepScheme& scheme, int steps) {
  require(steps >= 0, "scheme_delta_coefficient: step count must be >= 0");
  require_forward_scheme(scheme);
  if (scheme.alpha() == 0.0) return steps == 0 ? 1.0 : 0.0;
  return std::pow(-scheme.alpha() / scheme.beta(), steps);
}

SchemeDecomposition scheme_density_decomposition(const StepScheme& scheme, const GammaKernel& kernel) {
  require_forward_scheme(scheme);
  const int n = kernel.steps();
  const double alpha = scheme.alpha();
  const double beta = scheme.beta();

  SchemeDecomposition result;
  result.delta_coefficient = scheme_delta_coefficient(scheme, n);
  const double scale = beta * kernel.tau();
  if (alpha == 0.0) {
    result.terms.push_back({1.0, n, scale});
    return result;
  }
  result.terms.reserve(n);
  for (int j = 1; j <= n; ++j) {
    // lgamma-based binomials lose ~1e-12 relative, which the alternating sum amplifies
    const double c = boost::math::binomial_coefficient<double>(n, j) * std::pow(-alpha / beta, n - j) *
                     std::pow(beta, -j);
    result.terms.push_back({c, j, scale});
  }
  return result;
}

double SchemeDecomposition::regular_density(double offset) const {
  double sum = 0.0;
  for (const auto& term : terms) {
    sum += term.weight * gamma_density(GammaKernel(term.shape, term.scale), offset, 0.0);
  }
  return sum;
}

double SchemeDecomposition::total_mass() const {
  double sum = delta_coefficient;
  for (const auto& term : terms) sum += term.weight;
  return sum;
}

ProbeResult advection_negativity_probe(const StepScheme& scheme, const GammaKernel& kernel,
                                       const AdvectionGrid& grid, double sigma) {
  require_forward_scheme(scheme);
  const std::size_t points = grid.points;
  require(points >= 16 && (points & (points - 1)) == 0, "advection probe: grid size must be a power of two >= 16");
  require(grid.length > 0.0 && std::isfinite(grid.length), "advection probe: domain length must be positive");
  require(sigma > 0.0 && std::isfinite(sigma), "advection probe: sigma must be positive");

  const double dx = grid.length / static_cast<double>(points);
  if (sigma < 4.0 * dx) {
    fail(ErrorCode::GridUnderResolved, "advection probe: sigma = " + num(sigma) +
                                           " is below 4 grid spacings (dx = " + num(dx) + ")");
  }
  const double drift = kernel.mean_time();
  if (grid.length < drift + 20.0 * sigma) {
    fail(ErrorCode::GridUnderResolved, "advection probe: domain length " + num(grid.length) +
                                           " is shorter than drift + 20 sigma = " +
                                           num(drift + 20.0 * sigma));
  }

  ProbeResult result;
  result.origin = 10.0 * sigma;
  result.xi.resize(points);
  result.profile.resize(points);

  const std::size_t modes = points / 2 + 1;
  FftwBuffer real_buf(sizeof(double) * points);
  FftwBuffer spec_buf(sizeof(fftw_complex) * modes);
  auto* real = static_cast<double*>(real_buf.ptr);
  auto* spec = static_cast<fftw_complex*>(spec_buf.ptr);

  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t j = 0; j < points; ++j) {
    const double x = dx * static_cast<double>(j);
    result.xi[j] = x;
    double value = 0.0;
    for (int image = -1; image <= 1; ++image) {
      const double d = (x - result.origin - image * grid.length) / sigma;
      value += norm * std::exp(-0.5 * d * d);
    }
    real[j] = value;
  }

  Plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward.reset(fftw_plan_dft_r2c_1d(static_cast<int>(points), real, spec, FFTW_ESTIMATE));
    backward.reset(fftw_plan_dft_c2r_1d(static_cast<int>(points), spec, real, FFTW_ESTIMATE));
  }
  fftw_execute(forward.get());

  // Multiplier of the n-step operator for the e^{-ik xi} convention:
  // ((1 - i alpha tau k) / (1 + i beta tau k))^n, evaluated through logs for large n.
  const double tau = kernel.tau();
  const double n = kernel.steps();
  for (std::size_t m = 0; m < modes; ++m) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / grid.length;
    const std::complex<double> numer(1.0, -scheme.alpha() * tau * k);
    const std::complex<double> denom(1.0, scheme.beta() * tau * k);
    const std::complex<double> factor = std::exp(n * (std::log(numer) - std::log(denom)));
    const std::complex<double> value = std::complex<double>(spec[m][0], spec[m][1]) * factor;
    spec[m][0] = value.real();
    spec[m][1] = value.imag();
  }
  fftw_execute(backward.get());

  const double inv = 1.0 / static_cast<double>(points);
  for (std::size_t j = 0; j < points; ++j) result.profile[j] = real[j] * inv;
  const auto [lo, hi] = std::minmax_element(result.profile.begin(), result.profile.end());
  result.minimum = *lo;
  result.peak = *hi;
  return result;
}

}  // namespace dtm

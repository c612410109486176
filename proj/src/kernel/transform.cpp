#include "kernel/transform.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "kernel/sampling.hpp"

namespace dtm {
namespace {

using cplx = std::complex<double>;

constexpr double kNegligibleWeight = 1e-16;

cplx project(const TimeSignal& signal, cplx value) {
  return signal.is_real() ? cplx(value.real(), 0.0) : value;
}

// Real-axis rule: sum_k w_k F(tau u_k).
cplx real_axis_sum(const TimeSignal& signal, const GammaKernel& kernel, const QuadratureRule& rule) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  std::vector<cplx> terms(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double t = kernel.tau() * nodes[k];
    if (t > signal.domain_end()) {
      if (weights[k] <= kNegligibleWeight) continue;
      fail(ErrorCode::SignalDomainExceeded,
           "signal '" + signal.label() + "' domain [0, " + num(signal.domain_end()) +
               "] does not cover the quadrature node at t = " + num(t));
    }
    terms[k] = weights[k] * signal(t);
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

// tau F'(t) / F(t) along the real axis from the continuation. Fourth-order stencil;
// the step is shrunk until it resolves the local rate, otherwise fast phases bias rho.
std::optional<cplx> log_derivative(const TimeSignal& signal, double t, double tau) {
  const cplx f0 = signal.continuation(t);
  if (!(std::abs(f0) > 0.0) || !std::isfinite(std::abs(f0))) return std::nullopt;
  double h = 1e-3 * std::max(1.0, t);
  cplx rate;
  for (int pass = 0; pass < 2; ++pass) {
    const cplx d = (8.0 * (signal.continuation(t + h) - signal.continuation(t - h)) -
                    (signal.continuation(t + 2.0 * h) - signal.continuation(t - 2.0 * h))) /
                   (12.0 * h);
    rate = d / f0;
    if (!std::isfinite(rate.real()) || !std::isfinite(rate.imag())) return std::nullopt;
    if (std::abs(rate) * h <= 1e-2) break;
    h = 1e-2 / std::abs(rate);
  }
  return tau * rate;
}

// Rotation/scaling rho = 1 - tau F'/F when the signal behaves like C e^{l t} over the
// kernel's support; the contour u = sigma / rho then makes the integrand non-oscillatory.
std::optional<cplx> ray_parameter(const TimeSignal& signal, const GammaKernel& kernel) {
  const double n = kernel.steps();
  const double t1 = kernel.tau() * n;
  const double t2 = kernel.tau() * (n + 2.0 * std::sqrt(n) + 2.0);
  const auto l1 = log_derivative(signal, t1, kernel.tau());
  const auto l2 = log_derivative(signal, t2, kernel.tau());
  if (!l1 || !l2) return std::nullopt;
  if (std::abs(*l1 - *l2) > 1e-6 * (1.0 + std::abs(*l1))) return std::nullopt;
  const cplx rho = 1.0 - *l1;
  if (!(rho.real() > 0.0)) return std::nullopt;
  return rho;
}

// rho^{-n} sum_k w_k exp(sigma_k (1 - 1/rho)) F(tau sigma_k / rho).
cplx ray_sum(const TimeSignal& signal, const GammaKernel& kernel, const QuadratureRule& rule, cplx rho) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  const cplx inv_rho = 1.0 / rho;
  std::vector<cplx> terms(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double sigma = nodes[k];
    const cplx f = signal.continuation(kernel.tau() * sigma * inv_rho);
    if (f == cplx(0.0, 0.0)) continue;
    terms[k] = weights[k] * std::exp(sigma * (1.0 - inv_rho) + std::log(f));
  }
  const cplx sum = pairwise_sum(std::span<const cplx>(terms));
  return std::exp(-static_cast<double>(kernel.steps()) * std::log(rho)) * sum;
}

struct Estimate {
  cplx value;
  double error;
};

bool accepted(const ErrorTarget& target, const Estimate& e) {
  return std::isfinite(e.error) && target.accepts(e.error, std::abs(e.value));
}

double declared_or_zero_growth(const TimeSignal& signal) {
  return signal.growth_rate().value_or(0.0);
}

// Adaptive Gauss-Kronrod panels over u, each panel one standard deviation wide in
// the standardized variable s = (u - n) / sqrt(n).
Estimate panel_integral(const TimeSignal& signal, const GammaKernel& kernel, const ErrorTarget& target,
                        int* evaluations) {
  using boost::math::quadrature::gauss_kronrod;
  const int n = kernel.steps();
  const double tau = kernel.tau();
  const double width = std::sqrt(static_cast<double>(n));
  const double g = std::max(0.0, declared_or_zero_growth(signal)) * tau;
  const double peak_u = std::max(0.0, (n - 1.0) / (1.0 - g));
  const double envelope_peak = log_kernel_weight(n, std::max(peak_u, 1e-300)) + g * peak_u;
  auto envelope = [&](double u) { return log_kernel_weight(n, u) + g * u; };
  constexpr double kDrop = 60.0;

  double lo = peak_u;
  while (lo > 0.0 && envelope(lo) > envelope_peak - kDrop) lo = std::max(0.0, lo - width);
  double hi = peak_u + width;
  while (envelope(hi) > envelope_peak - kDrop) hi += width;
  hi = std::min(hi, signal.domain_end() / tau);
  if (!(hi > lo)) fail(ErrorCode::SignalDomainExceeded, "signal domain ends before the kernel support");

  int count = 0;
  auto integrand = [&](double u) -> cplx {
    ++count;
    const double lw = log_kernel_weight(n, u);
    if (!std::isfinite(lw)) return cplx(0.0, 0.0);
    return std::exp(lw) * signal(tau * u);
  };

  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  const double step = (hi - lo) / panels;
  std::vector<cplx> values(panels);
  std::vector<double> errors(panels);
  const double tol = std::max(target.relative * 1e-2, 1e-15);
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * step;
    const double b = (p + 1 == panels) ? hi : a + step;
    double err = 0.0;
    values[p] = gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, tol, &err);
    errors[p] = err;
  }
  if (evaluations) *evaluations = count;
  return {pairwise_sum(std::span<const cplx>(values)), pairwise_sum(std::span<const double>(errors))};
}

}  // namespace

const char* transform_path_name(TransformPath path) noexcept {
  switch (path) {
    case TransformPath::Identity: return "identity";
    case TransformPath::RotatedRay: return "rotated-ray";
    case TransformPath::GaussLaguerre: return "gauss-laguerre";
    case TransformPath::AdaptivePanels: return "adaptive-panels";
  }
  return "unknown";
}

double effective_support(const GammaKernel& kernel) noexcept {
  const double n = kernel.steps();
  return kernel.tau() * (n + 10.0 * std::sqrt(n) + 50.0);
}

double quadrature_support(const GammaKernel& kernel, const QuadratureOptions& options, double weight_floor) {
  const int m = options.node_count > 0 ? options.node_count : QuadratureRule::default_node_count(kernel.steps());
  const QuadratureRule fine(kernel.steps(), 2 * m);
  double support = effective_support(kernel);
  for (int k = 0; k < fine.size(); ++k) {
    if (fine.weights()[k] > weight_floor) support = std::max(support, kernel.tau() * fine.nodes()[k]);
  }
  return support;
}

void screen_growth(const TimeSignal& signal, const GammaKernel& kernel) {
  const double tau = kernel.tau();
  if (const auto g = signal.growth_rate()) {
    if (*g * tau >= 1.0) {
      fail(ErrorCode::DivergentTransform,
           "declared growth rate " + num(*g) + " gives g*tau = " + num(*g * tau) +
               " >= 1; the gamma transform diverges");
    }
    return;
  }
  const double n = kernel.steps();
  const double probe = n + 10.0 * std::sqrt(n) + 50.0;
  const double span = 2.0 + std::sqrt(n);
  if (tau * (probe + 2.0 * span) > signal.domain_end()) return;  // cannot probe; the domain check governs

  auto window_max = [&](double from) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 8; ++k) {
      const double u = from + span * k / 8.0;
      const double mag = std::abs(signal(tau * u));
      if (mag > 0.0 && std::isfinite(mag)) best = std::max(best, log_kernel_weight(kernel.steps(), u) + std::log(mag));
      if (!std::isfinite(mag)) return std::numeric_limits<double>::infinity();
    }
    return best;
  };
  const double before = window_max(probe - span);
  const double after = window_max(probe + span);
  if (before == std::numeric_limits<double>::infinity() || after > before) {
    fail(ErrorCode::DivergentTransform,
         "integrand of signal '" + signal.label() + "' is still increasing (or overflows) at u = " + num(probe) +
             "; suspected super-exponential growth");
  }
}

TransformResult transform_quadrature(const TimeSignal& signal, const GammaKernel& kernel,
                                     const QuadratureRule& rule, const QuadratureOptions& options) {
  require(rule.shape() == kernel.steps(), "transform_quadrature: rule shape does not match the kernel step count");
  screen_growth(signal, kernel);
  const ErrorTarget& target = rule.target();
  const QuadratureRule fine = rule.doubled();

  std::optional<Estimate> best;
  auto keep_best = [&](const Estimate& e) {
    if (std::isfinite(e.error) && (!best || e.error < best->error)) best = e;
  };

  if (options.allow_contour_rotation && signal.has_continuation()) {
    if (const auto rho = ray_parameter(signal, kernel)) {
      const cplx coarse = project(signal, ray_sum(signal, kernel, rule, *rho));
      const cplx refined = project(signal, ray_sum(signal, kernel, fine, *rho));
      const Estimate e{refined, std::abs(refined - coarse)};
      if (accepted(target, e)) return {e.value, e.error, TransformPath::RotatedRay, fine.size()};
      keep_best(e);
    }
  }

  {
    const cplx coarse = real_axis_sum(signal, kernel, rule);
    const cplx refined = real_axis_sum(signal, kernel, fine);
    const Estimate e{project(signal, refined), std::abs(refined - coarse)};
    if (accepted(target, e)) return {e.value, e.error, TransformPath::GaussLaguerre, fine.size()};
    keep_best(e);
  }

  if (options.allow_panel_fallback) {
    int evaluations = 0;
    Estimate e = panel_integral(signal, kernel, target, &evaluations);
    e.value = project(signal, e.value);
    if (accepted(target, e)) return {e.value, e.error, TransformPath::AdaptivePanels, evaluations};
    keep_best(e);
  }

  const double err = best ? best->error : std::numeric_limits<double>::infinity();
  const double mag = best ? std::abs(best->value) : 0.0;
  fail(ErrorCode::QuadratureNotConverged,
       "transform of '" + signal.label() + "' at n = " + num(kernel.steps()) +
           ", tau = " + num(kernel.tau()) + " did not converge: error estimate " +
           num(err) + " for magnitude " + num(mag));
}

TransformResult transform_quadrature(const TimeSignal& signal, const GammaKernel& kernel,
                                     const QuadratureOptions& options) {
  const int m = options.node_count > 0 ? options.node_count : QuadratureRule::default_node_count(kernel.steps());
  return transform_quadrature(signal, kernel, QuadratureRule(kernel.steps(), m, options.target), options);
}

TransformResult transform_at_step(const TimeSignal& signal, int steps, double tau, const QuadratureOptions& options) {
  require(steps >= 0, "transform_at_step: step count must be >= 0");
  if (steps == 0) return {project(signal, signal(0.0)), 0.0, TransformPath::Identity, 0};
  return transform_quadrature(signal, GammaKernel(steps, tau), options);
}

MonteCarloResult transform_monte_carlo(const TimeSignal& signal, const GammaKernel& kernel, std::size_t samples,
                                       std::uint64_t seed) {
  require(samples >= 2, "transform_monte_carlo: need at least 2 samples");
  screen_growth(signal, kernel);

  Rng rng(seed);
  std::vector<double> times(samples);
  for (auto& t : times) t = sample_internal_time(kernel, rng);

  std::vector<cplx> values(samples);
  parallel_for(samples, [&](std::size_t i) { values[i] = project(signal, signal(times[i])); });

  const cplx mean = pairwise_sum(std::span<const cplx>(values)) / static_cast<double>(samples);
  std::vector<double> squares(samples);
  for (std::size_t i = 0; i < samples; ++i) squares[i] = std::norm(values[i] - mean);
  const double variance = pairwise_sum(std::span<const double>(squares)) / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples)), samples};
}

}  // namespace dtm

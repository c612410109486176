#include "nonlinear/sensitivity.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "kernel/signal.hpp"
#include "kernel/transform.hpp"

namespace dtm {
namespace {

using cplx = std::complex<double>;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, std::size_t from) {
  double sx = 0.0, sy = 0.0;
  std::size_t count = 0;
  for (std::size_t k = from; k < x.size(); ++k) {
    if (!std::isfinite(y[k])) continue;
    sx += x[k];
    sy += y[k];
    ++count;
  }
  if (count < 2) fail(ErrorCode::FitUnstable, "fewer than two finite points in the fit window");
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = from; k < x.size(); ++k) {
    if (!std::isfinite(y[k])) continue;
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::FitUnstable, "degenerate fit window");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t k = from; k < x.size(); ++k) {
    if (!std::isfinite(y[k])) continue;
    const double r = y[k] - (fit.intercept + fit.slope * x[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  fit.points = count;
  return fit;
}

LyapunovEstimate finish_fit(std::vector<double> x, std::vector<double> y, std::size_t from, double max_residual,
                            const char* what) {
  const LineFit fit = fit_line(x, y, from);
  LyapunovEstimate est;
  est.exponent = fit.slope;
  est.intercept = fit.intercept;
  est.window_lo = x[from];
  est.window_hi = x.back();
  est.residual = fit.residual;
  est.first_fitted = from;
  est.abscissa = std::move(x);
  est.log_distance = std::move(y);
  if (!(fit.residual <= max_residual)) {
    fail(ErrorCode::FitUnstable, std::string(what) + ": fit residual " + num(fit.residual) +
                                     " exceeds " + num(max_residual) + " (slope " +
                                     num(fit.slope) + ")");
  }
  return est;
}

// J = (1/(n-1)!) int_0^inf u^{n-1} e^{-(1 - k) u} exp(i b e^{k u}) du with k = c tau, evaluated on the
// contour 0 -> i h -> i h + inf. Stored as J = e^{log_scale} * scaled.
struct ContourValue {
  double log_scale = 0.0;
  cplx scaled;
  double abs_integral = 0.0;  // int |integrand| e^{-log_scale} along the contour
  double error = 0.0;
};

class ContourIntegrand {
 public:
  ContourIntegrand(int n, double k, double b) : n_(n), k_(k), b_(b), lg_(std::lgamma(static_cast<double>(n))) {}

  // log of the integrand; real part -inf where it vanishes.
  cplx log_value(cplx u) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    cplx e = -(1.0 - k_) * u - lg_;
    if (n_ > 1) {
      if (u == 0.0) return {-inf, 0.0};
      e += (n_ - 1.0) * std::log(u);
    }
    const double grow = k_ * u.real();
    if (grow > 700.0) return {-inf, 0.0};
    const double mag = b_ * std::exp(grow);
    const double angle = k_ * u.imag();
    // i b e^{k u} = i b e^{k x} (cos k y + i sin k y)
    e += cplx(-mag * std::sin(angle), mag * std::cos(angle));
    return e;
  }

  cplx scaled(cplx u, double shift) const {
    const cplx e = log_value(u);
    if (!std::isfinite(e.real()) || e.real() - shift < -745.0) return {0.0, 0.0};
    return std::exp(e - shift);
  }

 private:
  int n_;
  double k_, b_, lg_;
};

ContourValue contour_integral(int n, double k, double b, double h) {
  const ContourIntegrand f(n, k, b);

  double shift = -std::numeric_limits<double>::infinity();
  constexpr int kVerticalSamples = 512;
  for (int s = 0; s <= kVerticalSamples; ++s) {
    shift = std::max(shift, f.log_value(cplx(0.0, h * s / kVerticalSamples)).real());
  }
  // Walk the horizontal leg until the integrand has fallen far below its peak.
  constexpr double kStep = 0.25;
  constexpr double kDrop = 80.0;
  double x_end = 0.0;
  {
    double peak = -std::numeric_limits<double>::infinity();
    double x = 0.0;
    for (long it = 0; it < 4'000'000; ++it, x += kStep) {
      const double v = f.log_value(cplx(x, h)).real();
      if (v > peak) peak = v;
      if (v < std::max(peak, shift) - kDrop && v < peak) break;
    }
    x_end = x + kStep;
    shift = std::max(shift, peak);
  }
  if (!std::isfinite(shift)) fail(ErrorCode::QuadratureNotConverged, "contour integrand vanishes everywhere");

  using boost::math::quadrature::gauss_kronrod;
  ContourValue out;
  out.log_scale = shift;
  auto leg = [&](auto&& param, double lo, double hi, int panels, cplx direction) {
    const double width = (hi - lo) / panels;
    std::vector<cplx> values(panels);
    std::vector<double> mags(panels), errs(panels);
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * width;
      const double c = (p + 1 == panels) ? hi : a + width;
      auto g = [&](double s) { return f.scaled(param(s), shift); };
      auto gabs = [&](double s) { return std::abs(f.scaled(param(s), shift)); };
      double err = 0.0;
      values[p] = direction * gauss_kronrod<double, 61>::integrate(g, a, c, 8, 1e-14, &err);
      errs[p] = err;
      mags[p] = gauss_kronrod<double, 15>::integrate(gabs, a, c, 0, 0.0);
    }
    out.scaled += pairwise_sum(std::span<const cplx>(values));
    out.abs_integral += pairwise_sum(std::span<const double>(mags));
    out.error += pairwise_sum(std::span<const double>(errs));
  };
  const int vertical_panels = std::clamp(static_cast<int>(std::ceil(h / 2.0)), 16, 256);
  leg([](double y) { return cplx(0.0, y); }, 0.0, h, vertical_panels, cplx(0.0, 1.0));
  const int horizontal_panels = std::max(8, static_cast<int>(std::ceil(x_end / 2.0)));
  leg([h](double x) { return cplx(x, h); }, 0.0, x_end, horizontal_panels, cplx(1.0, 0.0));
  return out;
}

// Real-axis transform of the derivative signal; only trusted when the node doubling agrees to a
// purely relative tolerance.
std::optional<double> direct_log_distance(const SensitivityModel& model, const GammaKernel& kernel) {
  const double c = model.c;
  const double b = model.b;
  const TimeSignal signal =
      TimeSignal::closed_form([c, b](double t) { return std::exp(c * t) * std::sin(b * std::exp(c * t)); },
                              "sensitivity-derivative")
          .with_growth_bound(c);
  QuadratureOptions options;
  options.target = ErrorTarget{1e-10, 0.0};
  options.allow_contour_rotation = false;
  options.allow_panel_fallback = false;
  // Phase swept across the bulk of the kernel; beyond ~1e3 radians real-axis rules cannot
  // resolve the cancellation, so go straight to the contour.
  const double n = kernel.steps();
  const double bulk = kernel.tau() * (n + 6.0 * std::sqrt(n));
  if (b * std::exp(c * bulk) > 1e3) return std::nullopt;
  const int base = QuadratureRule::default_node_count(kernel.steps());
  for (int m = base; m <= 4 * base && 2 * m <= 4096; m *= 2) {
    options.node_count = m;
    try {
      const TransformResult r = transform_quadrature(signal, kernel, options);
      const double v = std::abs(r.value.real());
      if (v > 0.0 && std::isfinite(v)) return std::log(v);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::QuadratureNotConverged) throw;
    }
  }
  return std::nullopt;
}

}  // namespace

SensitivityModel SensitivityModel::make(double a, double c) {
  SensitivityModel m{a, 0.0, c};
  require(std::isfinite(a) && std::abs(a) < 1.0, "SensitivityModel: |a| must be < 1");
  m.b = std::acos(a);
  m.validate();
  return m;
}

void SensitivityModel::validate() const {
  require(std::isfinite(a) && std::abs(a) < 1.0, "SensitivityModel: |a| must be < 1");
  require(std::isfinite(c) && c > 0.0, "SensitivityModel: c must be positive");
  require(std::abs(std::cos(b) - a) <= 1e-12 && b > 0.0 && b < std::numbers::pi,
          "SensitivityModel: b must be the principal arccos of a");
}

double SensitivityModel::distance_bound(double tau) const {
  require(tau > 0.0, "distance_bound: tau must be positive");
  return 2.0 / (b * c * tau * std::sqrt(1.0 - a * a));
}

double ct_position(const SensitivityModel& model, double t) {
  model.validate();
  require(t >= 0.0, "ct_position: t must be >= 0");
  return std::cos(model.b * std::exp(model.c * t));
}

double ct_distance(const SensitivityModel& model, double t) {
  model.validate();
  require(t >= 0.0, "ct_distance: t must be >= 0");
  const double g = std::exp(model.c * t);
  return std::abs(std::sin(model.b * g)) * g / std::sqrt(1.0 - model.a * model.a);
}

LyapunovEstimate ct_lyapunov(const SensitivityModel& model, double t_max, int samples, double max_residual) {
  model.validate();
  require(model.c * t_max >= 10.0, "ct_lyapunov: need c * t_max >= 10");
  require(samples >= 4, "ct_lyapunov: need at least 4 samples");
  std::vector<double> t(samples), y(samples);
  for (int k = 0; k < samples; ++k) {
    t[k] = t_max * k / (samples - 1);
    y[k] = std::log(ct_distance(model, t[k]));
  }
  return finish_fit(std::move(t), std::move(y), static_cast<std::size_t>((samples - 1) / 2), max_residual,
                    "ct_lyapunov");
}

double dt_log_distance(const SensitivityModel& model, const GammaKernel& kernel) {
  model.validate();
  const double k = model.c * kernel.tau();
  if (k >= 1.0) {
    fail(ErrorCode::DivergentTransform,
         "c * tau = " + num(k) + " >= 1; the discrete distance integral diverges");
  }
  const double norm = -0.5 * std::log1p(-model.a * model.a);
  if (const auto direct = direct_log_distance(model, kernel)) return *direct + norm;

  // Rotate the horizontal leg to height h with k h in (0, pi): there exp(i b e^{k u}) decays
  // super-exponentially. k h = pi/2 removes the oscillation; lower legs are fallbacks.
  std::optional<ContourValue> best;
  double best_rel = std::numeric_limits<double>::infinity();
  for (double fraction : {0.5, 0.25, 0.125, 0.0625}) {
    const double h = fraction * std::numbers::pi / k;
    const ContourValue v = contour_integral(kernel.steps(), k, model.b, h);
    const double im = std::abs(v.scaled.imag());
    if (!(im > 0.0)) continue;
    const double rel = (v.error + v.abs_integral * 1e-16) / im;
    if (rel < best_rel) {
      best_rel = rel;
      best = v;
    }
    if (best_rel <= 1e-8) break;
  }
  if (!best || best_rel > 1e-6) {
    fail(ErrorCode::QuadratureNotConverged, "discrete distance at n = " + num(kernel.steps()) +
                                                " did not converge (relative error " + num(best_rel) +
                                                ")");
  }
  return best->log_scale + std::log(std::abs(best->scaled.imag())) + norm;
}

double dt_distance(const SensitivityModel& model, const GammaKernel& kernel) {
  return std::exp(dt_log_distance(model, kernel));
}

LyapunovEstimate dt_lyapunov(const SensitivityModel& model, double tau, int n_max, double max_residual) {
  model.validate();
  require(tau > 0.0, "dt_lyapunov: tau must be positive");
  require(n_max * tau * model.c >= 10.0, "dt_lyapunov: need n_max * tau * c >= 10");
  std::vector<double> x(n_max), y(n_max);
  parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    x[i] = n * tau;
    y[i] = dt_log_distance(model, GammaKernel(n, tau));
  });
  return finish_fit(std::move(x), std::move(y), static_cast<std::size_t>(n_max / 2 - 1), max_residual,
                    "dt_lyapunov");
}

double power_law_value(double alpha, const GammaKernel& kernel) {
  require(std::isfinite(alpha) && alpha > -1.0, "power_law_map: alpha must be > -1");
  const double n = kernel.steps();
  if (alpha == std::floor(alpha) && alpha <= 20.0) {
    // Rising factorial n (n+1) ... (n+alpha-1), exact for small integer powers.
    double value = 1.0;
    for (int k = 0; k < static_cast<int>(alpha); ++k) value *= (n + k) * kernel.tau();
    return value;
  }
  return std::exp(alpha * std::log(kernel.tau()) + std::lgamma(n + alpha) - std::lgamma(n));
}

std::vector<double> power_law_map(double alpha, double tau, int n_max) {
  require(n_max >= 1, "power_law_map: need n_max >= 1");
  std::vector<double> out(n_max);
  for (int n = 1; n <= n_max; ++n) out[n - 1] = power_law_value(alpha, GammaKernel(n, tau));
  return out;
}

double exponential_map(double rate, double tau) {
  require(std::isfinite(rate), "exponential_map: rate must be finite");
  require(tau > 0.0 && std::isfinite(tau), "exponential_map: tau must be positive");
  if (rate * tau >= 1.0) {
    fail(ErrorCode::DivergentTransform,
         "b * tau = " + num(rate * tau) + " >= 1; e^{bt} has no discrete counterpart");
  }
  return -std::log1p(-rate * tau) / tau;
}

}  // namespace dtm

#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dtm {

/// A continuous-time observable history F_ct(t), t >= 0.
///
/// Signals are cheap to copy (shared evaluators) and immutable. A signal may
/// additionally carry an analytic continuation to complex time, which lets the
/// transform rotate its integration contour for oscillatory or growing inputs.
class TimeSignal {
 public:
  using RealFn = std::function<double(double)>;
  using ComplexFn = std::function<std::complex<double>(double)>;
  using ContinuationFn = std::function<std::complex<double>(std::complex<double>)>;

  static TimeSignal closed_form(RealFn f, std::string label = "closed-form");
  static TimeSignal closed_form_complex(ComplexFn f, std::string label = "closed-form");
  /// f must be holomorphic in the right half-plane; real_valued means f is real on the real axis.
  static TimeSignal analytic(ContinuationFn f, bool real_valued, std::string label = "analytic");
  /// Samples (t_k, F_k) with strictly increasing t starting at 0. order 1 (linear) or 3 (cubic Lagrange).
  static TimeSignal tabulated(std::vector<double> t, std::vector<double> values, int order = 3);

  static TimeSignal constant(double value);
  static TimeSignal power(int exponent);
  static TimeSignal cosine(double omega);
  static TimeSignal exponential(double rate);
  static TimeSignal complex_exponential(double omega);

  /// Declares |F(t)| <= C e^{rate t}.
  TimeSignal with_growth_bound(double rate) const;
  /// Restricts evaluation to [0, t_max].
  TimeSignal with_domain(double t_max) const;

  std::complex<double> operator()(double t) const;
  std::complex<double> continuation(std::complex<double> z) const;

  bool is_real() const noexcept { return real_valued_; }
  bool has_continuation() const noexcept { return static_cast<bool>(continuation_); }
  std::optional<double> growth_rate() const noexcept { return growth_rate_; }
  double domain_end() const noexcept { return domain_end_; }
  const std::string& label() const noexcept { return label_; }

 private:
  TimeSignal() = default;

  ComplexFn eval_;
  ContinuationFn continuation_;
  bool real_valued_ = true;
  std::optional<double> growth_rate_;
  double domain_end_ = std::numeric_limits<double>::infinity();
  std::string label_;
};

}  // namespace dtm

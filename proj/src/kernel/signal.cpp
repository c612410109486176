#include "kernel/signal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "common/error.hpp"

namespace dtm {

TimeSignal TimeSignal::closed_form(RealFn f, std::string label) {
  require(static_cast<bool>(f), "TimeSignal: empty evaluator");
  TimeSignal s;
  s.eval_ = [f = std::move(f)](double t) { return std::complex<double>(f(t), 0.0); };
  s.real_valued_ = true;
  s.label_ = std::move(label);
  return s;
}

TimeSignal TimeSignal::closed_form_complex(ComplexFn f, std::string label) {
  require(static_cast<bool>(f), "TimeSignal: empty evaluator");
  TimeSignal s;
  s.eval_ = std::move(f);
  s.real_valued_ = false;
  s.label_ = std::move(label);
  return s;
}

TimeSignal TimeSignal::analytic(ContinuationFn f, bool real_valued, std::string label) {
  require(static_cast<bool>(f), "TimeSignal: empty evaluator");
  TimeSignal s;
  s.continuation_ = f;
  if (real_valued) {
    s.eval_ = [f](double t) { return std::complex<double>(f({t, 0.0}).real(), 0.0); };
  } else {
    s.eval_ = [f](double t) { return f({t, 0.0}); };
  }
  s.real_valued_ = real_valued;
  s.label_ = std::move(label);
  return s;
}

TimeSignal TimeSignal::tabulated(std::vector<double> t, std::vector<double> values, int order) {
  require(order == 1 || order == 3, "TimeSignal: tabulated interpolation order must be 1 or 3");
  require(t.size() == values.size(), "TimeSignal: time and value columns differ in length");
  require(t.size() >= static_cast<std::size_t>(order + 1), "TimeSignal: too few samples for interpolation order");
  require(t.front() == 0.0, "TimeSignal: tabulated samples must start at t = 0");
  for (std::size_t k = 1; k < t.size(); ++k) {
    require(t[k] > t[k - 1], "TimeSignal: tabulated times must be strictly increasing");
  }
  for (double v : values) require(std::isfinite(v), "TimeSignal: tabulated values must be finite");

  auto table = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(t), std::move(values));
  const double t_end = table->first.back();

  TimeSignal s;
  s.eval_ = [table, order](double x) {
    const auto& ts = table->first;
    const auto& fs = table->second;
    const std::size_t count = ts.size();
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), x) - ts.begin());
    hi = std::clamp<std::size_t>(hi, 1, count - 1);
    if (order == 1) {
      const std::size_t lo = hi - 1;
      const double w = (x - ts[lo]) / (ts[hi] - ts[lo]);
      return std::complex<double>(fs[lo] + w * (fs[hi] - fs[lo]), 0.0);
    }
    // Four-point Lagrange stencil centred on the bracketing interval.
    std::size_t first = hi >= 2 ? hi - 2 : 0;
    first = std::min(first, count - 4);
    double sum = 0.0;
    for (std::size_t i = first; i < first + 4; ++i) {
      double basis = 1.0;
      for (std::size_t j = first; j < first + 4; ++j) {
        if (j != i) basis *= (x - ts[j]) / (ts[i] - ts[j]);
      }
      sum += basis * fs[i];
    }
    return std::complex<double>(sum, 0.0);
  };
  s.real_valued_ = true;
  s.domain_end_ = t_end;
  s.label_ = "tabulated";
  return s;
}

TimeSignal TimeSignal::constant(double value) {
  return analytic([value](std::complex<double>) { return std::complex<double>(value, 0.0); }, true,
                  "const")
      .with_growth_bound(0.0);
}

TimeSignal TimeSignal::power(int exponent) {
  require(exponent >= 0, "TimeSignal: power exponent must be >= 0");
  return analytic([exponent](std::complex<double> z) { return std::pow(z, exponent); }, true,
                  "poly:" + num(exponent))
      .with_growth_bound(0.0);
}

TimeSignal TimeSignal::cosine(double omega) {
  require(std::isfinite(omega), "TimeSignal: cosine frequency must be finite");
  return analytic([omega](std::complex<double> z) { return std::cos(omega * z); }, true, "cos")
      .with_growth_bound(0.0);
}

TimeSignal TimeSignal::exponential(double rate) {
  require(std::isfinite(rate), "TimeSignal: exponential rate must be finite");
  return analytic([rate](std::complex<double> z) { return std::exp(rate * z); }, true, "exp")
      .with_growth_bound(std::max(rate, 0.0));
}

TimeSignal TimeSignal::complex_exponential(double omega) {
  require(std::isfinite(omega), "TimeSignal: frequency must be finite");
  return analytic(
             [omega](std::complex<double> z) {
               return std::exp(std::complex<double>(0.0, omega) * z);
             },
             false, "cexp")
      .with_growth_bound(0.0);
}

TimeSignal TimeSignal::with_growth_bound(double rate) const {
  require(std::isfinite(rate), "TimeSignal: growth bound must be finite");
  TimeSignal s = *this;
  s.growth_rate_ = rate;
  return s;
}

TimeSignal TimeSignal::with_domain(double t_max) const {
  require(t_max > 0.0, "TimeSignal: domain end must be positive");
  TimeSignal s = *this;
  s.domain_end_ = std::min(domain_end_, t_max);
  return s;
}

std::complex<double> TimeSignal::operator()(double t) const {
  if (t < 0.0 || t > domain_end_) {
    fail(ErrorCode::SignalDomainExceeded,
         "signal '" + label_ + "' evaluated at t = " + num(t) + " outside [0, " +
             num(domain_end_) + "]");
  }
  return eval_(t);
}

std::complex<double> TimeSignal::continuation(std::complex<double> z) const {
  if (!continuation_) fail(ErrorCode::InvalidArgument, "signal '" + label_ + "' has no analytic continuation");
  return continuation_(z);
}

}  // namespace dtm

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "common/error.hpp"
#include "kernel/gamma_kernel.hpp"
#include "kernel/quadrature.hpp"
#include "kernel/sampling.hpp"
#include "kernel/scheme.hpp"
#include "kernel/transform.hpp"
#include "oracles.hpp"

using namespace dtm;

namespace {

double real_transform(const TimeSignal& s, int n, double tau) {
  return transform_quadrature(s, GammaKernel(n, tau)).value.real();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("gamma density basics") {
  const double eps = 1e-12;
  CHECK(gamma_density(GammaKernel(1, 1.0), eps, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  for (int n : {1, 2, 5, 40}) CHECK(gamma_density(GammaKernel(n, 0.7), 1.0, 2.0) == 0.0);

  // maximizer of the n = 3 density, found by scanning
  const GammaKernel k3(3, 1.0);
  double best = 0.0, arg = 0.0;
  for (int i = 1; i <= 100000; ++i) {
    const double x = i * 1e-4;
    const double v = gamma_density(k3, x, 0.0);
    if (v > best) best = v, arg = x;
  }
  CHECK(arg == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("log density agrees with density and survives large n") {
  CHECK(log_gamma_density(GammaKernel(1, 1.0), 1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(log_gamma_density(GammaKernel(4, 1.0), -1.0, 0.0) == -std::numeric_limits<double>::infinity());

  const long double x = 199.0L;
  const long double want = 199.0L * std::log(x) - x - std::lgamma(200.0L);
  const double got = log_gamma_density(GammaKernel(200, 1.0), 199.0, 0.0);
  CHECK(std::isfinite(got));
  CHECK(oracle::rel_err(got, static_cast<double>(want)) < 1e-13);

  for (int n : {1, 3, 10, 60}) {
    for (double xi : {0.05, 0.9, 3.0, 25.0}) {
      const GammaKernel k(n, 0.8);
      const double d = gamma_density(k, xi + 1.0, 1.0);
      if (d > 1e-300) CHECK(oracle::rel_err(std::exp(log_gamma_density(k, xi + 1.0, 1.0)), d) < 1e-12);
    }
  }
}

TEST_CASE("transform of simple signals") {
  for (int n : {1, 2, 7, 30, 120}) {
    for (double tau : {0.01, 0.5, 3.0}) {
      CHECK(std::abs(real_transform(TimeSignal::constant(1.0), n, tau) - 1.0) < 1e-12);
      CHECK(oracle::rel_err(real_transform(TimeSignal::power(1), n, tau), n * tau) < 1e-12);
    }
  }
  const double want = oracle::gamma_average([](double t) { return std::cos(t); }, 1, 1.0);
  CHECK(want == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(real_transform(TimeSignal::cosine(1.0), 1, 1.0) - want) < 1e-12);
}

TEST_CASE("power moments match log-gamma arithmetic") {
  double worst = 0.0;
  for (int k = 0; k <= 6; ++k)
    for (int n = 1; n <= 50; ++n)
      for (double tau : {0.1, 1.0, 2.5}) {
        const double got = real_transform(TimeSignal::power(k), n, tau);
        worst = std::max(worst, oracle::rel_err(got, oracle::power_moment(k, n, tau)));
      }
  CHECK(worst < 1e-10);
}

TEST_CASE("complex exponential maps to a rational power") {
  double worst = 0.0;
  for (double wt : {0.1, 1.0, 3.0})
    for (int n = 1; n <= 30; ++n) {
      const double tau = 0.5;
      const auto got = transform_quadrature(TimeSignal::complex_exponential(wt / tau), GammaKernel(n, tau)).value;
      worst = std::max(worst, oracle::rel_err(got, oracle::cexp_transform(wt / tau, n, tau)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("n steps equal n single steps on exponentials") {
  for (double b : {-2.0, -0.3, 0.4}) {
    const double tau = 0.5;
    const TimeSignal s = TimeSignal::exponential(b);
    const double one = real_transform(s, 1, tau);
    for (int n : {2, 5, 17, 40}) CHECK(oracle::rel_err(real_transform(s, n, tau), std::pow(one, n)) < 1e-10);
  }
}

TEST_CASE("fixed time limit approaches the continuous value") {
  double prev = std::numeric_limits<double>::infinity();
  for (double tau : {0.1, 0.01, 0.001}) {
    const int n = static_cast<int>(std::lround(1.0 / tau));
    const double err = std::abs(real_transform(TimeSignal::cosine(1.0), n, tau) - std::cos(1.0));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("growth screening and divergence") {
  CHECK(code_of([] { real_transform(TimeSignal::exponential(2.0), 3, 1.0); }) == ErrorCode::DivergentTransform);
  const TimeSignal fast = TimeSignal::closed_form([](double t) { return std::exp(t * t); }, "exp(t^2)");
  CHECK(code_of([&] { real_transform(fast, 2, 0.5); }) == ErrorCode::DivergentTransform);
  const TimeSignal bounded = TimeSignal::closed_form([](double t) { return 1.0 / (1.0 + t); }, "1/(1+t)");
  const double want = oracle::gamma_average([](double t) { return 1.0 / (1.0 + t); }, 4, 0.3);
  CHECK(oracle::rel_err(real_transform(bounded, 4, 0.3), want) < 1e-9);
}

TEST_CASE("tabulated signals") {
  std::vector<double> t, v;
  for (int i = 0; i <= 4000; ++i) {
    t.push_back(i * 0.01);
    v.push_back(std::exp(-0.5 * t.back()));
  }
  const TimeSignal s = TimeSignal::tabulated(t, v, 3);
  // 1 / (1 + 0.5 tau)^n
  CHECK(oracle::rel_err(real_transform(s, 3, 0.4), std::pow(1.2, -3)) < 1e-8);
  CHECK(code_of([&] { real_transform(s, 400, 1.0); }) == ErrorCode::SignalDomainExceeded);
}

TEST_CASE("quadrature rules integrate polynomials exactly") {
  for (int shape : {1, 4, 50}) {
    const QuadratureRule rule(shape, 32);
    double sum = 0.0;
    for (double w : rule.weights()) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    double m3 = 0.0;
    for (int k = 0; k < rule.size(); ++k) m3 += rule.weights()[k] * std::pow(rule.nodes()[k], 3);
    CHECK(oracle::rel_err(m3, oracle::power_moment(3, shape, 1.0)) < 1e-13);
  }
  CHECK(QuadratureRule::default_node_count(1) == 32);
  CHECK(QuadratureRule::default_node_count(400) == 80);
}

TEST_CASE("monte carlo estimates") {
  const GammaKernel k1(1, 1.0);
  const auto one = transform_monte_carlo(TimeSignal::constant(1.0), k1, 1000, 3);
  CHECK(one.estimate.real() == 1.0);
  CHECK(one.standard_error == 0.0);

  const auto mean = transform_monte_carlo(TimeSignal::power(1), GammaKernel(4, 0.5), 20000, 11);
  CHECK(std::abs(mean.estimate.real() - 2.0) < 4.0 * mean.standard_error);

  const auto c = transform_monte_carlo(TimeSignal::cosine(1.0), k1, 20000, 12);
  CHECK(std::abs(c.estimate.real() - 0.5) < 4.0 * c.standard_error);
  const double quad = real_transform(TimeSignal::cosine(1.0), 1, 1.0);
  CHECK(std::abs(c.estimate.real() - quad) < 4.0 * c.standard_error);

  const auto again = transform_monte_carlo(TimeSignal::cosine(1.0), k1, 20000, 12);
  CHECK(again.estimate == c.estimate);
}

TEST_CASE("internal time sampling") {
  // n = 1 is exponential; Kolmogorov-Smirnov at the 1% level
  const std::size_t N = 100000;
  Rng rng(2024);
  const GammaKernel k1(1, 1.5);
  std::vector<double> s(N);
  for (auto& v : s) v = sample_internal_time(k1, rng);
  std::sort(s.begin(), s.end());
  double D = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double F = 1.0 - std::exp(-s[i] / 1.5);
    D = std::max({D, std::abs(F - static_cast<double>(i) / N), std::abs(F - static_cast<double>(i + 1) / N)});
  }
  CHECK(D < 1.628 / std::sqrt(static_cast<double>(N)));

  for (int n : {5, 40}) {  // both sides of the sampler switch
    Rng r(7);
    const GammaKernel k(n, 2.0);
    double sum = 0.0;
    const int M = 20000;
    for (int i = 0; i < M; ++i) sum += sample_internal_time(k, r);
    const double sigma = std::sqrt(n * 4.0 / M);
    CHECK(std::abs(sum / M - 2.0 * n) < 4.0 * sigma);
  }

  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(sample_internal_time(GammaKernel(3, 1.0), a) == sample_internal_time(GammaKernel(3, 1.0), b));
}

TEST_CASE("scheme delta coefficient") {
  for (int n = 1; n <= 6; ++n) CHECK(scheme_delta_coefficient(StepScheme(0.0), n) == 0.0);
  CHECK(scheme_delta_coefficient(StepScheme(0.5), 1) == -1.0);
  CHECK(scheme_delta_coefficient(StepScheme(0.5), 2) == 1.0);
  for (double a : {0.1, 0.3, 0.7})
    for (int n : {1, 3, 5}) CHECK(scheme_delta_coefficient(StepScheme(a), n) < 0.0);
  CHECK(code_of([] { scheme_delta_coefficient(StepScheme(1.0), 1); }) == ErrorCode::BackwardOnly);
}

TEST_CASE("scheme decomposition") {
  const auto back = scheme_density_decomposition(StepScheme(0.0), GammaKernel(4, 1.0));
  CHECK(back.delta_coefficient == 0.0);
  double nonzero = 0.0;
  int shape = 0;
  for (const auto& t : back.terms)
    if (t.weight != 0.0) nonzero += t.weight, shape = t.shape;
  CHECK(nonzero == doctest::Approx(1.0));
  CHECK(shape == 4);

  const auto half = scheme_density_decomposition(StepScheme(0.5), GammaKernel(1, 1.0));
  CHECK(half.delta_coefficient == -1.0);
  REQUIRE(half.terms.size() == 1);
  CHECK(half.terms[0].weight == doctest::Approx(2.0));

  // alternating weights: round-off scales with sum |C_j| = ((alpha + beta) / beta)^n
  for (double a : {0.0, 0.2, 0.5, 0.8})
    for (int n = 1; n <= 12; ++n) {
      const auto dec = scheme_density_decomposition(StepScheme(a), GammaKernel(n, 0.7));
      const double spread = std::pow(1.0 / (1.0 - a), n);
      CHECK(std::abs(dec.total_mass() - 1.0) <= 1e-13 * spread);
    }
}

TEST_CASE("advection probe") {
  const auto back = advection_negativity_probe(StepScheme(0.0), GammaKernel(3, 1.0), {8192, 8.0}, 0.1);
  CHECK(back.minimum >= -1e-8);

  // smeared delta term with weight -1 plus 2 x (Gaussian * exponential of scale 1/2)
  const double sigma = 0.01;
  const auto mixed = advection_negativity_probe(StepScheme(0.5), GammaKernel(1, 1.0), {32768, 16.0}, sigma);
  CHECK(mixed.minimum < 0.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < mixed.xi.size(); ++j) {
    const double x = mixed.xi[j] - mixed.origin;
    const double want = -oracle::gaussian(x, sigma) + 2.0 * oracle::exp_modified_gaussian(x, sigma, 0.5);
    worst = std::max(worst, std::abs(mixed.profile[j] - want));
  }
  CHECK(worst < 1e-6 * mixed.peak);

  // backward single step: Gaussian convolved with exponential of scale tau
  const auto one = advection_negativity_probe(StepScheme(0.0), GammaKernel(1, 1.0), {16384, 32.0}, 0.1);
  worst = 0.0;
  for (std::size_t j = 0; j < one.xi.size(); ++j)
    worst = std::max(worst, std::abs(one.profile[j] - oracle::exp_modified_gaussian(one.xi[j] - one.origin, 0.1, 1.0)));
  CHECK(worst < 1e-6);

  for (int n = 1; n <= 10; ++n) {
    const auto r = advection_negativity_probe(StepScheme(0.0), GammaKernel(n, 1.0), {8192, 32.0}, 0.1);
    CHECK(r.minimum >= -1e-8 * r.peak);
  }

  CHECK(code_of([] { advection_negativity_probe(StepScheme(0.5), GammaKernel(1, 1.0), {4096, 20.0}, 0.01); }) ==
        ErrorCode::GridUnderResolved);
}

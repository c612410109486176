#pragma once
// Reference values computed independently of the library: long double log-gamma,
// complex powers, exp-sinh integration and a hand-rolled generator.

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

// tau^k Gamma(n + k) / Gamma(n)
inline double power_moment(int k, int n, double tau) {
  const long double v = std::exp(static_cast<long double>(k) * std::log(static_cast<long double>(tau)) +
                                 std::lgamma(static_cast<long double>(n + k)) -
                                 std::lgamma(static_cast<long double>(n)));
  return static_cast<double>(v);
}

// (1 - i omega tau)^{-n}
inline std::complex<double> cexp_transform(double omega, int n, double tau) {
  const std::complex<long double> z(1.0L, -static_cast<long double>(omega) * tau);
  const auto v = std::pow(z, -static_cast<long double>(n));
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// (1/(n-1)!) int_0^inf u^{n-1} e^{-u} f(tau u) du by exp-sinh; only for smooth, modest integrands.
template <class F>
double gamma_average(F f, int n, double tau) {
  boost::math::quadrature::exp_sinh<double> integrator;
  const double lg = std::lgamma(static_cast<double>(n));
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    return std::exp((n - 1) * std::log(u) - u - lg) * f(tau * u);
  };
  return integrator.integrate(g, 1e-13);
}

// Gaussian of width s convolved with the exponential density (1/m) e^{-y/m}, y > 0.
inline double exp_modified_gaussian(double x, double s, double m) {
  const double z = (s * s / m - x) / (s * std::sqrt(2.0));
  if (z > 25.0) {
    // far left tail: asymptotic erfc(z) e^{z^2}, avoids inf * 0
    const double erfcx = (1.0 - 0.5 / (z * z)) / (z * std::sqrt(M_PI));
    return std::exp(-x * x / (2.0 * s * s)) * erfcx / (2.0 * m);
  }
  return (1.0 / (2.0 * m)) * std::exp(s * s / (2.0 * m * m) - x / m) * std::erfc(z);
}

inline double gaussian(double x, double s) {
  return std::exp(-0.5 * (x / s) * (x / s)) / (s * std::sqrt(2.0 * M_PI));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Small deterministic generator for property tests (xorshift64*).
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed ? seed : 0x2545F4914F6CDD1DULL) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1DULL;
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t s_;
};

// Random density matrix G G^dagger / tr, row-major real and imaginary parts.
inline void random_density(Gen& g, int d, std::vector<double>& re, std::vector<double>& im, int rank = -1) {
  if (rank < 0) rank = d;
  std::vector<std::complex<double>> G(static_cast<std::size_t>(d) * rank);
  for (auto& v : G) v = {g.normal(), g.normal()};
  std::vector<std::complex<double>> rho(static_cast<std::size_t>(d) * d);
  double tr = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < rank; ++k) s += G[a * rank + k] * std::conj(G[b * rank + k]);
      rho[a * d + b] = s;
      if (a == b) tr += s.real();
    }
  re.resize(rho.size());
  im.resize(rho.size());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      // enforce exact Hermitian symmetry after scaling
      const auto v = (a <= b) ? rho[a * d + b] / tr : std::conj(rho[b * d + a] / tr);
      re[a * d + b] = v.real();
      im[a * d + b] = (a == b) ? 0.0 : v.imag();
    }
}

}  // namespace oracle

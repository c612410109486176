#include "quantum/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace dtm {
namespace {

double reduced_gap(double delta_e, const PhysicalConstants& constants) {
  constants.validate();
  require(std::isfinite(delta_e), "energy gap must be finite");
  return constants.tau * delta_e / constants.hbar;
}

void check_steps(int steps) { require(steps >= 0, "step count must be >= 0"); }

}  // namespace

std::complex<double> evolution_factor(int steps, double delta_e, const PhysicalConstants& constants) {
  check_steps(steps);
  const double x = reduced_gap(delta_e, constants);
  if (steps == 0 || x == 0.0) return {1.0, 0.0};
  const double modulus = std::exp(-0.5 * steps * std::log1p(x * x));
  return std::polar(modulus, -steps * std::atan(x));
}

DensityMatrix evolve_density(const DensityMatrix& dm, int steps, const PhysicalConstants& constants) {
  check_steps(steps);
  const Eigen::MatrixXcd factors = schur_multiplier(dm.energies(), steps, constants);
  return DensityMatrix(DensityMatrix::Unchecked{}, dm.energies(), dm.coeffs().cwiseProduct(factors));
}

double decoherence_time(double delta_e, const PhysicalConstants& constants) {
  const double x = reduced_gap(delta_e, constants);
  const double rate = std::log1p(x * x);
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * constants.tau / rate;
}

double offdiagonal_modulus(int steps, double delta_e, const PhysicalConstants& constants) {
  check_steps(steps);
  const double x = reduced_gap(delta_e, constants);
  return std::exp(-0.5 * steps * std::log1p(x * x));
}

double schroedinger_defect(int steps, double delta_e, const PhysicalConstants& constants) {
  require(steps >= 1, "schroedinger_defect: step count must be >= 1");
  const double x = reduced_gap(delta_e, constants);
  return 0.5 * steps * std::log1p(x * x);
}

Eigen::MatrixXcd schur_multiplier(const std::vector<double>& energies, int steps,
                                  const PhysicalConstants& constants) {
  check_steps(steps);
  const auto d = static_cast<Eigen::Index>(energies.size());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    m(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < d; ++b) {
      const std::complex<double> f = evolution_factor(steps, energies[a] - energies[b], constants);
      m(a, b) = f;
      m(b, a) = std::conj(f);
    }
  }
  return m;
}

EquivalenceResult gamma_equivalence_check(const DensityMatrix& dm, int steps, const PhysicalConstants& constants,
                                          const QuadratureOptions& options) {
  check_steps(steps);
  const DensityMatrix evolved = evolve_density(dm, steps, constants);
  const int d = dm.dim();
  const std::size_t count = static_cast<std::size_t>(d) * d;
  std::vector<double> deviation(count, 0.0), estimate(count, 0.0);

  parallel_for(count, [&](std::size_t idx) {
    const int a = static_cast<int>(idx / d);
    const int b = static_cast<int>(idx % d);
    const std::complex<double> coeff = dm.coeffs()(a, b);
    if (coeff == 0.0) return;
    // Work in units of tau so the signal frequency is the reduced gap.
    const double omega = -reduced_gap(dm.energies()[a] - dm.energies()[b], constants);
    const TransformResult r = transform_at_step(TimeSignal::complex_exponential(omega), steps, 1.0, options);
    deviation[idx] = std::abs(coeff * r.value - evolved.coeffs()(a, b));
    estimate[idx] = std::abs(coeff) * r.error_estimate;
  });
  return {*std::max_element(deviation.begin(), deviation.end()),
          *std::max_element(estimate.begin(), estimate.end())};
}

DecoherenceReport decoherence_report(const std::vector<double>& energies, const std::vector<int>& steps,
                                     const PhysicalConstants& constants) {
  DecoherenceReport report;
  report.steps = steps;
  const int d = static_cast<int>(energies.size());
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      PairDecoherence pair;
      pair.alpha = a;
      pair.beta = b;
      pair.delta_e = energies[a] - energies[b];
      pair.decoherence_time = decoherence_time(pair.delta_e, constants);
      for (int n : steps) pair.moduli.push_back(offdiagonal_modulus(n, pair.delta_e, constants));
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

}  // namespace dtm

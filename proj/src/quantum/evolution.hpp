#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "kernel/transform.hpp"
#include "quantum/density_matrix.hpp"

namespace dtm {

/// [1 + i tau delta_e / hbar]^{-n} in polar form. n = 0 gives 1.
std::complex<double> evolution_factor(int steps, double delta_e, const PhysicalConstants& constants);

/// b_ab = a_ab [1 + i tau (e_a - e_b) / hbar]^{-n}.
DensityMatrix evolve_density(const DensityMatrix& dm, int steps, const PhysicalConstants& constants);

/// 2 tau / log(1 + (delta_e tau / hbar)^2); +inf when the gap vanishes.
double decoherence_time(double delta_e, const PhysicalConstants& constants);

/// [1 + (tau delta_e / hbar)^2]^{-n/2}.
double offdiagonal_modulus(int steps, double delta_e, const PhysicalConstants& constants);

/// (n/2) log(1 + (tau delta_e / hbar)^2): the imaginary part left over when a unimodular
/// phase is required to reproduce the discrete evolution. Zero only for a vanishing gap.
double schroedinger_defect(int steps, double delta_e, const PhysicalConstants& constants);

/// M_ab = [1 + i tau (e_a - e_b) / hbar]^{-n}; evolution acts as entrywise multiplication by M.
Eigen::MatrixXcd schur_multiplier(const std::vector<double>& energies, int steps,
                                  const PhysicalConstants& constants);

struct EquivalenceResult {
  double max_deviation = 0.0;
  double max_error_estimate = 0.0;
};

/// Largest |evolve_density entry - gamma transform of a_ab exp(-i (e_a - e_b) t / hbar)|.
EquivalenceResult gamma_equivalence_check(const DensityMatrix& dm, int steps, const PhysicalConstants& constants,
                                          const QuadratureOptions& options = {});

struct PairDecoherence {
  int alpha = 0;
  int beta = 0;
  double delta_e = 0.0;
  double decoherence_time = 0.0;
  std::vector<double> moduli;  ///< |factor| at each requested step
};

struct DecoherenceReport {
  std::vector<int> steps;
  std::vector<PairDecoherence> pairs;  ///< alpha < beta, row-major order
};

DecoherenceReport decoherence_report(const std::vector<double>& energies, const std::vector<int>& steps,
                                     const PhysicalConstants& constants);

}  // namespace dtm

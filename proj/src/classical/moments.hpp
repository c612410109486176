#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "classical/trajectory.hpp"
#include "kernel/transform.hpp"

namespace dtm {

/// Moments of the discrete state at one step n. Pair matrices are l x l, row-major.
struct MomentStep {
  int n = 0;
  std::vector<double> mean_x, mean_p;
  std::vector<double> mean_x2, mean_p2;
  std::vector<double> mean_xx;
  std::vector<double> var_x, var_p;
  std::vector<double> cov_xx;
  double energy = 0.0;  ///< NaN when the model has no Hamiltonian
};

struct MomentRow {
  int n;
  int i;  ///< -1 for whole-system quantities (energy)
  int j;
  std::string name;
  double value;
};

struct MomentReport {
  std::size_t dof = 0;
  std::vector<MomentStep> steps;   ///< n = 0..N
  std::vector<bool> zero_amplitude;  ///< oscillator: r_i = 0, angle undefined

  /// Flat rows ordered by (n, i, j, name); the CSV payload.
  std::vector<MomentRow> rows() const;
};

MomentReport free_particle_moments(const PhaseState& state, double tau, int max_steps);

/// Unit mass and frequency oscillator. Throws InvalidArgument when a mass differs from 1.
MomentReport sho_moments(const PhaseState& state, double tau, int max_steps);

/// Oscillator with common frequency omega and arbitrary masses, by rescaling to
/// q = sqrt(m omega) x, P = p / sqrt(m omega), tau' = omega tau. Energy is in the original units.
MomentReport sho_moments_scaled(const PhaseState& state, double omega, double tau, int max_steps);

using PhaseFunction = std::function<double(std::span<const double> x, std::span<const double> p)>;

/// Gamma transform of t -> f(z(t)) along the trajectory for n = 0..N. The trajectory is
/// solved once over the largest support the rules need.
std::vector<double> evolve_observable(const HamiltonianModel& model, const PhaseState& state,
                                      const PhaseFunction& f, double tau, int max_steps,
                                      const QuadratureOptions& options = {});

/// All first and second moments through evolve_observable instead of closed forms.
MomentReport quadrature_moments(const HamiltonianModel& model, const PhaseState& state, double tau,
                                int max_steps, const QuadratureOptions& options = {});

/// Trajectory horizon used by evolve_observable for steps 0..N.
double observable_horizon(double tau, int max_steps, const QuadratureOptions& options = {});

}  // namespace dtm

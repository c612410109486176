#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace dtm {

/// Deterministic initial point (x(0), p(0)) with per-degree-of-freedom masses.
struct PhaseState {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> masses;

  /// Unit masses.
  static PhaseState unit_mass(std::vector<double> x, std::vector<double> p);

  std::size_t dof() const noexcept { return x.size(); }
  /// Throws InvalidArgument unless all vectors share length >= 1 and masses > 0.
  void validate() const;
};

struct FreeParticle {};

/// H = sum (p_i^2 + x_i^2) / 2, unit masses and frequencies.
struct HarmonicOscillator {};

/// General first-order system dz/dt = f(z) on the phase vector z = (x_1..x_l, p_1..p_l).
struct CustomField {
  std::function<void(std::span<const double> z, std::span<double> dz)> field;
};

using HamiltonianModel = std::variant<FreeParticle, HarmonicOscillator, CustomField>;

/// Continuous solution over [0, t_max]. Closed forms for the free particle and the
/// oscillator; Dormand-Prince 5(4) with its continuous extension otherwise.
class Trajectory {
 public:
  /// Writes z(t) = (x(t), p(t)) into out (size 2l). Throws SignalDomainExceeded outside [0, t_max].
  void state_at(double t, std::span<double> out) const;

  std::size_t dof() const noexcept { return dof_; }
  double t_max() const noexcept { return t_max_; }
  double tolerance() const noexcept { return tolerance_; }
  bool is_closed_form() const noexcept { return !record_; }
  /// Accepted step start times (empty for closed forms).
  std::span<const double> step_times() const noexcept;
  std::size_t rejected_steps() const noexcept { return rejected_; }

 private:
  friend Trajectory continuous_trajectory(const HamiltonianModel&, const PhaseState&, double, double);

  struct DenseRecord {
    std::vector<double> t0;
    std::vector<double> h;
    std::vector<double> coeffs;  // per step: 5 blocks of 2l continuous-extension coefficients
  };

  enum class Kind { Free, Oscillator, Dense };

  Kind kind_ = Kind::Dense;
  std::size_t dof_ = 0;
  double t_max_ = 0.0;
  double tolerance_ = 0.0;
  std::size_t rejected_ = 0;
  PhaseState initial_;
  std::shared_ptr<const DenseRecord> record_;
};

/// Solves the model from the deterministic initial state up to t_max. Throws
/// StiffnessFailure when adaptive step control collapses.
Trajectory continuous_trajectory(const HamiltonianModel& model, const PhaseState& state, double t_max,
                                 double tolerance = 1e-10);

}  // namespace dtm

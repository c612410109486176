#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dtm {

/// hbar and the time quantum tau in a consistent unit system.
struct PhysicalConstants {
  double hbar = 1.0;
  double tau = 1.0;

  static PhysicalConstants natural() noexcept { return {1.0, 1.0}; }
  /// hbar in J s, tau = 5.4e-44 s (Planck time).
  static PhysicalConstants si_planck() noexcept { return {1.054571817e-34, 5.4e-44}; }

  void validate() const;
};

/// Joules per electronvolt.
inline constexpr double kElectronVolt = 1.602176634e-19;
/// Seconds per Julian year.
inline constexpr double kJulianYear = 3.15576e7;

/// Density matrix in the energy eigenbasis: rho = sum a_ab |a><b|.
class DensityMatrix {
 public:
  /// Throws InvalidState unless coeffs is d x d Hermitian to 1e-12, unit trace to 1e-12
  /// and positive semidefinite (min eigenvalue >= -1e-10).
  DensityMatrix(std::vector<double> energies, Eigen::MatrixXcd coeffs);

  /// Nearest valid state: Hermitian part, negative eigenvalues clipped, trace renormalized.
  /// *changed reports whether the input differed from the result by more than the tolerances.
  static DensityMatrix projected(std::vector<double> energies, const Eigen::MatrixXcd& coeffs,
                                 bool* changed = nullptr);

  int dim() const noexcept { return static_cast<int>(energies_.size()); }
  const std::vector<double>& energies() const noexcept { return energies_; }
  const Eigen::MatrixXcd& coeffs() const noexcept { return coeffs_; }

  double trace() const;
  /// tr(rho^2).
  double purity() const;
  double min_eigenvalue() const;
  /// max |a_ab - conj(a_ba)|.
  double hermiticity_error() const;

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, std::vector<double> energies, Eigen::MatrixXcd coeffs)
      : energies_(std::move(energies)), coeffs_(std::move(coeffs)) {}
  friend DensityMatrix evolve_density(const DensityMatrix&, int, const PhysicalConstants&);

  std::vector<double> energies_;
  Eigen::MatrixXcd coeffs_;
};

}  // namespace dtm

#include "quantum/density_matrix.hpp"

#include <cmath>
#include <string>

#include "common/error.hpp"

namespace dtm {
namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;

double max_hermitian_gap(const Eigen::MatrixXcd& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double smallest_eigenvalue(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void check_shape(const std::vector<double>& energies, const Eigen::MatrixXcd& coeffs) {
  require(!energies.empty(), "DensityMatrix: need at least one level");
  for (double e : energies) require(std::isfinite(e), "DensityMatrix: energies must be finite");
  const auto d = static_cast<Eigen::Index>(energies.size());
  require(coeffs.rows() == d && coeffs.cols() == d, "DensityMatrix: coefficient matrix must be d x d");
  require(coeffs.allFinite(), "DensityMatrix: coefficients must be finite");
}

}  // namespace

void PhysicalConstants::validate() const {
  require(hbar > 0.0 && std::isfinite(hbar), "PhysicalConstants: hbar must be positive");
  require(tau > 0.0 && std::isfinite(tau), "PhysicalConstants: tau must be positive");
}

DensityMatrix::DensityMatrix(std::vector<double> energies, Eigen::MatrixXcd coeffs)
    : energies_(std::move(energies)), coeffs_(std::move(coeffs)) {
  check_shape(energies_, coeffs_);
  const double herm = max_hermitian_gap(coeffs_);
  if (herm > kHermitianTol) {
    fail(ErrorCode::InvalidState, "density matrix is not Hermitian (gap " + num(herm) + ")");
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    fail(ErrorCode::InvalidState, "density matrix trace is " + num(tr) + ", expected 1");
  }
  const double lo = min_eigenvalue();
  if (lo < -kPsdTol) {
    fail(ErrorCode::InvalidState, "density matrix is not positive semidefinite (min eigenvalue " +
                                      num(lo) + ")");
  }
}

DensityMatrix DensityMatrix::projected(std::vector<double> energies, const Eigen::MatrixXcd& coeffs,
                                       bool* changed) {
  check_shape(energies, coeffs);
  const Eigen::MatrixXcd h = 0.5 * (coeffs + coeffs.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXd values = solver.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  if (!(total > 0.0)) fail(ErrorCode::InvalidState, "density matrix has no positive spectral weight");
  values /= total;
  Eigen::MatrixXcd fixed = solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
  fixed = 0.5 * (fixed + fixed.adjoint()).eval();
  if (changed) *changed = (fixed - coeffs).cwiseAbs().maxCoeff() > kHermitianTol;
  return DensityMatrix(Unchecked{}, std::move(energies), std::move(fixed));
}

double DensityMatrix::trace() const { return coeffs_.trace().real(); }

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |a_ab|^2 for Hermitian rho.
  return coeffs_.cwiseAbs2().sum();
}

double DensityMatrix::min_eigenvalue() const { return smallest_eigenvalue(coeffs_); }

double DensityMatrix::hermiticity_error() const { return max_hermitian_gap(coeffs_); }

}  // namespace dtm

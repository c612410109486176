#pragma once

#include <cstddef>
#include <vector>

#include "kernel/gamma_kernel.hpp"

namespace dtm {

/// Weight (-alpha/beta)^n of the singular delta term left behind by an alpha-scheme.
/// Throws BackwardOnly when beta = 0.
double scheme_delta_coefficient(const StepScheme& scheme, int steps);

struct MixtureTerm {
  double weight;  ///< C_j = beta^{-n} binom(n, j) (-alpha)^{n-j}
  int shape;      ///< j
  double scale;   ///< beta * tau
};

/// Density of the internal time after n steps of an alpha-scheme:
/// delta_coefficient * delta(xi - xi0) + sum_j C_j h_j(xi - xi0), h_j a Gamma(j, beta tau) density.
struct SchemeDecomposition {
  double delta_coefficient = 0.0;
  std::vector<MixtureTerm> terms;

  /// Regular part sum_j C_j h_j at xi - xi0 = offset.
  double regular_density(double offset) const;
  /// delta_coefficient + sum_j C_j; equals 1.
  double total_mass() const;
};

SchemeDecomposition scheme_density_decomposition(const StepScheme& scheme, const GammaKernel& kernel);

struct AdvectionGrid {
  std::size_t points = 4096;  ///< power of two
  double length = 20.0;       ///< periodic domain [0, length)
};

struct ProbeResult {
  std::vector<double> xi;
  std::vector<double> profile;
  double origin = 0.0;   ///< centre of the initial Gaussian
  double minimum = 0.0;
  double peak = 0.0;
};

/// Evolves a normalized Gaussian of width sigma under n steps of the alpha-scheme
/// with L = -d/dxi, spectrally on a periodic grid. Throws GridUnderResolved when
/// sigma < 4 dx or the domain is shorter than n tau + 20 sigma.
ProbeResult advection_negativity_probe(const StepScheme& scheme, const GammaKernel& kernel,
                                       const AdvectionGrid& grid, double sigma);

}  // namespace dtm

#pragma once

#include <vector>

#include "kernel/gamma_kernel.hpp"

namespace dtm {

/// x_ct(a, t) = cos(b e^{ct}) with b = arccos a on the principal branch.
struct SensitivityModel {
  double a = 0.5;
  double b = 0.0;
  double c = 1.0;

  /// Throws InvalidArgument unless |a| < 1 and c > 0.
  static SensitivityModel make(double a, double c);
  void validate() const;

  /// 2 / (b c tau sqrt(1 - a^2)): the discrete-time distance never exceeds this.
  double distance_bound(double tau) const;
};

double ct_position(const SensitivityModel& model, double t);

/// |dx_ct/da| = |sin(b e^{ct})| e^{ct} / sqrt(1 - a^2).
double ct_distance(const SensitivityModel& model, double t);

struct LyapunovEstimate {
  double exponent = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;  ///< abscissa range of the fitted points (t, or n tau)
  double window_hi = 0.0;
  double residual = 0.0;   ///< RMS of the log-distance fit
  std::vector<double> abscissa;      ///< every sampled point, fitted or not
  std::vector<double> log_distance;
  std::size_t first_fitted = 0;      ///< index where the fitted last half starts
};

/// Least-squares slope of log d_ct over the last half of [0, t_max] (samples points).
/// Requires c t_max >= 10. Throws FitUnstable when the residual exceeds max_residual.
LyapunovEstimate ct_lyapunov(const SensitivityModel& model, double t_max, int samples = 4001,
                             double max_residual = 3.0);

/// log d_dt(n), where d_dt(n) = |(1/(n-1)!) int u^{n-1} e^{-u} e^{c tau u} sin(b e^{c tau u}) du| / sqrt(1 - a^2).
/// Finite even when d_dt underflows. Requires c tau < 1 (DivergentTransform otherwise).
double dt_log_distance(const SensitivityModel& model, const GammaKernel& kernel);
double dt_distance(const SensitivityModel& model, const GammaKernel& kernel);

/// Fit of log d_dt(n) against n tau over n in [n_max/2, n_max]. Requires n_max tau c >= 10.
LyapunovEstimate dt_lyapunov(const SensitivityModel& model, double tau, int n_max, double max_residual = 3.0);

/// tau^alpha Gamma(n + alpha) / Gamma(n): the transform of t^alpha. Requires alpha > -1.
double power_law_value(double alpha, const GammaKernel& kernel);
/// Values for n = 1..n_max.
std::vector<double> power_law_map(double alpha, double tau, int n_max);

/// Effective discrete rate c = -log(1 - b tau) / tau, so e^{bt} maps to e^{c tau n}.
/// Throws DivergentTransform when b tau >= 1.
double exponential_map(double rate, double tau);

}  // namespace dtm

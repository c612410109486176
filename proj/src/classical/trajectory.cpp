#include "classical/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.hpp"

namespace dtm {
namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients (autonomous, so no c_i).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr std::size_t kMaxSteps = 5'000'000;

}  // namespace

PhaseState PhaseState::unit_mass(std::vector<double> x, std::vector<double> p) {
  PhaseState s{std::move(x), std::move(p), {}};
  s.masses.assign(s.x.size(), 1.0);
  return s;
}

void PhaseState::validate() const {
  require(!x.empty(), "PhaseState: need at least one degree of freedom");
  require(p.size() == x.size() && masses.size() == x.size(),
          "PhaseState: x, p and masses must share the same length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && std::isfinite(p[i]), "PhaseState: coordinates must be finite");
    require(std::isfinite(masses[i]) && masses[i] > 0.0, "PhaseState: masses must be positive");
  }
}

std::span<const double> Trajectory::step_times() const noexcept {
  if (!record_) return {};
  return record_->t0;
}

void Trajectory::state_at(double t, std::span<double> out) const {
  require(out.size() == 2 * dof_, "Trajectory: output span must hold 2l values");
  if (!(t >= 0.0 && t <= t_max_)) {
    fail(ErrorCode::SignalDomainExceeded,
         "trajectory evaluated at t = " + num(t) + " outside [0, " + num(t_max_) + "]");
  }
  const std::size_t l = dof_;
  switch (kind_) {
    case Kind::Free:
      for (std::size_t i = 0; i < l; ++i) {
        out[i] = initial_.x[i] + initial_.p[i] * t / initial_.masses[i];
        out[l + i] = initial_.p[i];
      }
      return;
    case Kind::Oscillator: {
      const double c = std::cos(t);
      const double s = std::sin(t);
      for (std::size_t i = 0; i < l; ++i) {
        out[i] = initial_.x[i] * c + initial_.p[i] * s;
        out[l + i] = initial_.p[i] * c - initial_.x[i] * s;
      }
      return;
    }
    case Kind::Dense: {
      const auto& rec = *record_;
      auto it = std::upper_bound(rec.t0.begin(), rec.t0.end(), t);
      const std::size_t step = it == rec.t0.begin() ? 0 : static_cast<std::size_t>(it - rec.t0.begin()) - 1;
      const double theta = (t - rec.t0[step]) / rec.h[step];
      const double theta1 = 1.0 - theta;
      const std::size_t dim = 2 * l;
      const double* rc = rec.coeffs.data() + step * 5 * dim;
      for (std::size_t k = 0; k < dim; ++k) {
        out[k] = rc[k] + theta * (rc[dim + k] +
                                  theta1 * (rc[2 * dim + k] + theta * (rc[3 * dim + k] + theta1 * rc[4 * dim + k])));
      }
      return;
    }
  }
}

Trajectory continuous_trajectory(const HamiltonianModel& model, const PhaseState& state, double t_max,
                                 double tolerance) {
  state.validate();
  require(t_max > 0.0 && std::isfinite(t_max), "continuous_trajectory: t_max must be positive and finite");
  require(tolerance > 0.0, "continuous_trajectory: tolerance must be positive");

  Trajectory traj;
  traj.dof_ = state.dof();
  traj.t_max_ = t_max;
  traj.tolerance_ = tolerance;
  traj.initial_ = state;

  if (std::holds_alternative<FreeParticle>(model)) {
    traj.kind_ = Trajectory::Kind::Free;
    return traj;
  }
  if (std::holds_alternative<HarmonicOscillator>(model)) {
    for (double m : state.masses) {
      require(m == 1.0, "continuous_trajectory: HarmonicOscillator uses unit masses and frequencies");
    }
    traj.kind_ = Trajectory::Kind::Oscillator;
    return traj;
  }

  const auto& field = std::get<CustomField>(model).field;
  require(static_cast<bool>(field), "continuous_trajectory: CustomField has no vector field");
  traj.kind_ = Trajectory::Kind::Dense;

  const std::size_t dim = 2 * state.dof();
  std::vector<double> y(dim), y1(dim), tmp(dim), err(dim);
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  std::copy(state.x.begin(), state.x.end(), y.begin());
  std::copy(state.p.begin(), state.p.end(), y.begin() + static_cast<std::ptrdiff_t>(state.dof()));

  auto f = [&](const std::vector<double>& in, std::vector<double>& out) {
    field(in, out);
    for (double v : out) {
      if (!std::isfinite(v)) fail(ErrorCode::StiffnessFailure, "vector field returned a non-finite value");
    }
  };
  auto scaled_norm = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double sk = tolerance + tolerance * std::max(std::abs(a[k]), std::abs(b[k]));
      acc += (err[k] / sk) * (err[k] / sk);
    }
    return std::sqrt(acc / static_cast<double>(dim));
  };

  auto record = std::make_shared<Trajectory::DenseRecord>();
  double t = 0.0;
  f(y, k1);
  double h = std::min(t_max, 1e-2);
  {
    // Initial step from the first derivative scale.
    double dnorm = 0.0, ynorm = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double sk = tolerance + tolerance * std::abs(y[k]);
      dnorm += (k1[k] / sk) * (k1[k] / sk);
      ynorm += (y[k] / sk) * (y[k] / sk);
    }
    dnorm = std::sqrt(dnorm / dim);
    ynorm = std::sqrt(ynorm / dim);
    if (dnorm > 1e-5 && ynorm > 1e-5) h = std::min(h, 0.01 * ynorm / dnorm);
    h = std::max(h, 1e-10);
  }

  std::size_t steps = 0;
  while (t < t_max) {
    if (++steps > kMaxSteps) fail(ErrorCode::StiffnessFailure, "step budget exhausted before reaching t_max");
    if (t + h > t_max) h = t_max - t;

    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + h * a21 * k1[k];
    f(tmp, k2);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + h * (a31 * k1[k] + a32 * k2[k]);
    f(tmp, k3);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + h * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
    f(tmp, k4);
    for (std::size_t k = 0; k < dim; ++k)
      tmp[k] = y[k] + h * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
    f(tmp, k5);
    for (std::size_t k = 0; k < dim; ++k)
      tmp[k] = y[k] + h * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k]);
    f(tmp, k6);
    for (std::size_t k = 0; k < dim; ++k)
      y1[k] = y[k] + h * (a71 * k1[k] + a73 * k3[k] + a74 * k4[k] + a75 * k5[k] + a76 * k6[k]);
    f(y1, k7);
    for (std::size_t k = 0; k < dim; ++k)
      err[k] = h * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);

    const double e = scaled_norm(y, y1);
    if (!std::isfinite(e)) fail(ErrorCode::StiffnessFailure, "error estimate is not finite");
    if (e <= 1.0) {
      const std::size_t base = record->coeffs.size();
      record->coeffs.resize(base + 5 * dim);
      double* rc = record->coeffs.data() + base;
      for (std::size_t k = 0; k < dim; ++k) {
        const double ydiff = y1[k] - y[k];
        const double bspl = h * k1[k] - ydiff;
        rc[k] = y[k];
        rc[dim + k] = ydiff;
        rc[2 * dim + k] = bspl;
        rc[3 * dim + k] = ydiff - h * k7[k] - bspl;
        rc[4 * dim + k] = h * (d1 * k1[k] + d3 * k3[k] + d4 * k4[k] + d5 * k5[k] + d6 * k6[k] + d7 * k7[k]);
      }
      record->t0.push_back(t);
      record->h.push_back(h);
      t = (t_max - (t + h) < 1e-14 * t_max) ? t_max : t + h;
      y.swap(y1);
      k1.swap(k7);
    } else {
      ++traj.rejected_;
    }
    const double factor = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
    h *= std::clamp(factor, 0.2, 10.0);
    if (t < t_max && h < 1e-14 * std::max(1.0, t)) {
      fail(ErrorCode::StiffnessFailure, "step size collapsed at t = " + num(t));
    }
  }
  // Last step must end exactly at t_max so dense evaluation covers the closed interval.
  record->h.back() = t_max - record->t0.back();
  traj.record_ = std::move(record);
  return traj;
}

}  // namespace dtm

#include "classical/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace dtm {
namespace {

MomentStep empty_step(int n, std::size_t l) {
  MomentStep s;
  s.n = n;
  s.mean_x.assign(l, 0.0);
  s.mean_p.assign(l, 0.0);
  s.mean_x2.assign(l, 0.0);
  s.mean_p2.assign(l, 0.0);
  s.mean_xx.assign(l * l, 0.0);
  s.var_x.assign(l, 0.0);
  s.var_p.assign(l, 0.0);
  s.cov_xx.assign(l * l, 0.0);
  return s;
}

// Fills variances and covariances from first and second moments.
void derive_spread(MomentStep& s, std::size_t l) {
  for (std::size_t i = 0; i < l; ++i) {
    s.mean_xx[i * l + i] = s.mean_x2[i];
    s.var_x[i] = s.mean_x2[i] - s.mean_x[i] * s.mean_x[i];
    s.var_p[i] = s.mean_p2[i] - s.mean_p[i] * s.mean_p[i];
  }
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) s.cov_xx[i * l + j] = s.mean_xx[i * l + j] - s.mean_x[i] * s.mean_x[j];
  }
}

void check_steps(double tau, int max_steps) {
  require(tau > 0.0 && std::isfinite(tau), "moments: tau must be positive");
  require(max_steps >= 0, "moments: step count must be >= 0");
}

}  // namespace

std::vector<MomentRow> MomentReport::rows() const {
  std::vector<MomentRow> out;
  const int l = static_cast<int>(dof);
  for (const auto& s : steps) {
    if (std::isfinite(s.energy)) out.push_back({s.n, -1, -1, "energy", s.energy});
    for (int i = 0; i < l; ++i) {
      out.push_back({s.n, i, i, "mean_p", s.mean_p[i]});
      out.push_back({s.n, i, i, "mean_p2", s.mean_p2[i]});
      out.push_back({s.n, i, i, "mean_x", s.mean_x[i]});
      out.push_back({s.n, i, i, "mean_x2", s.mean_x2[i]});
      out.push_back({s.n, i, i, "var_p", s.var_p[i]});
      out.push_back({s.n, i, i, "var_x", s.var_x[i]});
      for (int j = i + 1; j < l; ++j) {
        out.push_back({s.n, i, j, "cov_xx", s.cov_xx[i * l + j]});
        out.push_back({s.n, i, j, "mean_xx", s.mean_xx[i * l + j]});
      }
    }
  }
  return out;
}

MomentReport free_particle_moments(const PhaseState& state, double tau, int max_steps) {
  state.validate();
  check_steps(tau, max_steps);
  const std::size_t l = state.dof();
  MomentReport report;
  report.dof = l;
  report.zero_amplitude.assign(l, false);
  report.steps.reserve(max_steps + 1);

  double energy = 0.0;
  for (std::size_t i = 0; i < l; ++i) energy += state.p[i] * state.p[i] / (2.0 * state.masses[i]);

  for (int n = 0; n <= max_steps; ++n) {
    MomentStep s = empty_step(n, l);
    const double t = n * tau;
    for (std::size_t i = 0; i < l; ++i) {
      const double v = state.p[i] / state.masses[i];
      s.mean_x[i] = state.x[i] + v * t;
      s.mean_p[i] = state.p[i];
      s.mean_p2[i] = state.p[i] * state.p[i];
      s.var_x[i] = n * v * v * tau * tau;
      s.mean_x2[i] = s.mean_x[i] * s.mean_x[i] + s.var_x[i];
    }
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        const double cov = n * (state.p[i] / state.masses[i]) * (state.p[j] / state.masses[j]) * tau * tau;
        s.cov_xx[i * l + j] = cov;
        s.mean_xx[i * l + j] = s.mean_x[i] * s.mean_x[j] + cov;
      }
    }
    // var_p is identically zero: momentum is conserved along every trajectory.
    s.energy = energy;
    report.steps.push_back(std::move(s));
  }
  return report;
}

MomentReport sho_moments(const PhaseState& state, double tau, int max_steps) {
  state.validate();
  check_steps(tau, max_steps);
  for (double m : state.masses) require(m == 1.0, "sho_moments: unit masses required; use sho_moments_scaled");

  const std::size_t l = state.dof();
  std::vector<double> r(l), theta(l);
  MomentReport report;
  report.dof = l;
  report.zero_amplitude.assign(l, false);
  for (std::size_t i = 0; i < l; ++i) {
    r[i] = std::hypot(state.x[i], state.p[i]);
    theta[i] = std::atan2(state.x[i], state.p[i]);
    report.zero_amplitude[i] = r[i] == 0.0;
  }
  const double phi = std::atan(tau);
  const double phi2 = std::atan(2.0 * tau);

  report.steps.reserve(max_steps + 1);
  for (int n = 0; n <= max_steps; ++n) {
    MomentStep s = empty_step(n, l);
    const double damp1 = std::exp(-0.5 * n * std::log1p(tau * tau));
    const double damp2 = std::exp(-0.5 * n * std::log1p(4.0 * tau * tau));
    for (std::size_t i = 0; i < l; ++i) {
      s.mean_x[i] = r[i] * damp1 * std::sin(n * phi + theta[i]);
      s.mean_p[i] = r[i] * damp1 * std::cos(n * phi + theta[i]);
      const double c = std::cos(n * phi2 + 2.0 * theta[i]) * damp2;
      s.mean_x2[i] = 0.5 * r[i] * r[i] * (1.0 - c);
      s.mean_p2[i] = 0.5 * r[i] * r[i] * (1.0 + c);
    }
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        if (i == j) continue;
        s.mean_xx[i * l + j] =
            0.5 * r[i] * r[j] * (std::cos(theta[i] - theta[j]) - std::cos(n * phi2 + theta[i] + theta[j]) * damp2);
      }
    }
    derive_spread(s, l);
    double energy = 0.0;
    for (std::size_t i = 0; i < l; ++i) energy += 0.5 * (s.mean_x2[i] + s.mean_p2[i]);
    s.energy = energy;
    report.steps.push_back(std::move(s));
  }
  return report;
}

MomentReport sho_moments_scaled(const PhaseState& state, double omega, double tau, int max_steps) {
  state.validate();
  require(omega > 0.0 && std::isfinite(omega), "sho_moments_scaled: omega must be positive");
  const std::size_t l = state.dof();
  std::vector<double> scale(l);
  PhaseState unit = state;
  for (std::size_t i = 0; i < l; ++i) {
    scale[i] = std::sqrt(state.masses[i] * omega);
    unit.x[i] = state.x[i] * scale[i];
    unit.p[i] = state.p[i] / scale[i];
    unit.masses[i] = 1.0;
  }
  MomentReport report = sho_moments(unit, omega * tau, max_steps);
  for (auto& s : report.steps) {
    for (std::size_t i = 0; i < l; ++i) {
      s.mean_x[i] /= scale[i];
      s.mean_p[i] *= scale[i];
      s.mean_x2[i] /= scale[i] * scale[i];
      s.mean_p2[i] *= scale[i] * scale[i];
      s.var_x[i] /= scale[i] * scale[i];
      s.var_p[i] *= scale[i] * scale[i];
      for (std::size_t j = 0; j < l; ++j) {
        s.mean_xx[i * l + j] /= scale[i] * scale[j];
        s.cov_xx[i * l + j] /= scale[i] * scale[j];
      }
    }
    s.energy *= omega;
  }
  return report;
}

double observable_horizon(double tau, int max_steps, const QuadratureOptions& options) {
  require(tau > 0.0 && std::isfinite(tau), "observable_horizon: tau must be positive");
  double horizon = 0.0;
  for (int n = 1; n <= std::max(1, max_steps); ++n) {
    const GammaKernel kernel(n, tau);
    const double probe = tau * (n + 12.0 * std::sqrt(static_cast<double>(n)) + 55.0);  // growth screen reach
    horizon = std::max({horizon, quadrature_support(kernel, options), probe});
  }
  return horizon * (1.0 + 1e-9);
}

namespace {

// values[n * fs.size() + k] = transform of fs[k] along traj at step n.
std::vector<double> transform_many(const Trajectory& traj, const std::vector<PhaseFunction>& fs, double tau,
                                   int max_steps, const QuadratureOptions& options) {
  const std::size_t l = traj.dof();
  const std::size_t count = fs.size();
  std::vector<double> values((max_steps + 1) * count, 0.0);
  const double horizon = traj.t_max();

  parallel_for(static_cast<std::size_t>(max_steps + 1) * count, [&](std::size_t idx) {
    const int n = static_cast<int>(idx / count);
    const PhaseFunction& f = fs[idx % count];
    auto along = [&traj, &f, l](double t) {
      std::vector<double> z(2 * l);
      traj.state_at(t, z);
      return f(std::span<const double>(z).first(l), std::span<const double>(z).subspan(l));
    };
    const TimeSignal signal = TimeSignal::closed_form(along, "observable").with_domain(horizon);
    values[idx] = transform_at_step(signal, n, tau, options).value.real();
  });
  return values;
}

}  // namespace

std::vector<double> evolve_observable(const HamiltonianModel& model, const PhaseState& state,
                                      const PhaseFunction& f, double tau, int max_steps,
                                      const QuadratureOptions& options) {
  state.validate();
  check_steps(tau, max_steps);
  require(static_cast<bool>(f), "evolve_observable: empty phase function");
  const Trajectory traj = continuous_trajectory(model, state, observable_horizon(tau, max_steps, options));
  // an integrated trajectory is only good to its own tolerance; cancelling averages need that floor
  QuadratureOptions opts = options;
  if (traj.tolerance() > 0.0) {
    const double f0 = std::abs(f(state.x, state.p));
    opts.target.absolute = std::max(opts.target.absolute, traj.tolerance() * std::max(1.0, f0));
  }
  return transform_many(traj, {f}, tau, max_steps, opts);
}

MomentReport quadrature_moments(const HamiltonianModel& model, const PhaseState& state, double tau,
                                int max_steps, const QuadratureOptions& options) {
  state.validate();
  check_steps(tau, max_steps);
  const std::size_t l = state.dof();

  // Moments that cancel to zero need an absolute floor tied to the state's scale.
  double scale = 1.0;
  for (std::size_t i = 0; i < l; ++i) scale = std::max({scale, std::abs(state.x[i]), std::abs(state.p[i])});
  QuadratureOptions opts = options;
  opts.target.absolute = std::max(opts.target.absolute, 1e-13 * scale * scale);

  std::vector<PhaseFunction> fs;
  for (std::size_t i = 0; i < l; ++i) {
    fs.emplace_back([i](auto x, auto) { return x[i]; });
    fs.emplace_back([i](auto, auto p) { return p[i]; });
    fs.emplace_back([i](auto x, auto) { return x[i] * x[i]; });
    fs.emplace_back([i](auto, auto p) { return p[i] * p[i]; });
  }
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j < l; ++j) fs.emplace_back([i, j](auto x, auto) { return x[i] * x[j]; });
  }
  const bool has_energy = !std::holds_alternative<CustomField>(model);
  if (std::holds_alternative<HarmonicOscillator>(model)) {
    fs.emplace_back([l](auto x, auto p) {
      double h = 0.0;
      for (std::size_t i = 0; i < l; ++i) h += 0.5 * (x[i] * x[i] + p[i] * p[i]);
      return h;
    });
  } else if (std::holds_alternative<FreeParticle>(model)) {
    const std::vector<double> masses = state.masses;
    fs.emplace_back([l, masses](auto, auto p) {
      double h = 0.0;
      for (std::size_t i = 0; i < l; ++i) h += p[i] * p[i] / (2.0 * masses[i]);
      return h;
    });
  }

  const Trajectory traj = continuous_trajectory(model, state, observable_horizon(tau, max_steps, opts));
  const std::vector<double> values = transform_many(traj, fs, tau, max_steps, opts);

  MomentReport report;
  report.dof = l;
  report.zero_amplitude.assign(l, false);
  const std::size_t count = fs.size();
  for (int n = 0; n <= max_steps; ++n) {
    MomentStep s = empty_step(n, l);
    const double* v = values.data() + n * count;
    for (std::size_t i = 0; i < l; ++i) {
      s.mean_x[i] = v[4 * i];
      s.mean_p[i] = v[4 * i + 1];
      s.mean_x2[i] = v[4 * i + 2];
      s.mean_p2[i] = v[4 * i + 3];
    }
    std::size_t k = 4 * l;
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j < l; ++j, ++k) {
        s.mean_xx[i * l + j] = v[k];
        s.mean_xx[j * l + i] = v[k];
      }
    }
    derive_spread(s, l);
    s.energy = has_energy ? v[k] : std::numeric_limits<double>::quiet_NaN();
    report.steps.push_back(std::move(s));
  }
  return report;
}

}  // namespace dtm

#include "dtm/dtm.h"

#include <cmath>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "classical/moments.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"
#include "kernel/sampling.hpp"
#include "kernel/scheme.hpp"
#include "kernel/transform.hpp"
#include "nonlinear/sensitivity.hpp"
#include "quantum/evolution.hpp"

struct dtm_signal {
  dtm::TimeSignal signal;
};

struct dtm_moment_report {
  dtm::MomentReport report;
  std::vector<dtm::MomentRow> rows;
};

struct dtm_density_matrix {
  dtm::DensityMatrix dm;
};

namespace {

thread_local std::string last_error;

dtm_status to_status(dtm::ErrorCode code) {
  using dtm::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return DTM_ERR_INVALID_ARGUMENT;
    case ErrorCode::DivergentTransform: return DTM_ERR_DIVERGENT_TRANSFORM;
    case ErrorCode::QuadratureNotConverged: return DTM_ERR_QUADRATURE_NOT_CONVERGED;
    case ErrorCode::FitUnstable: return DTM_ERR_FIT_UNSTABLE;
    case ErrorCode::GridUnderResolved: return DTM_ERR_GRID_UNDER_RESOLVED;
    case ErrorCode::BackwardOnly: return DTM_ERR_BACKWARD_ONLY;
    case ErrorCode::StiffnessFailure: return DTM_ERR_STIFFNESS_FAILURE;
    case ErrorCode::InvalidState: return DTM_ERR_INVALID_STATE;
    case ErrorCode::SignalDomainExceeded: return DTM_ERR_SIGNAL_DOMAIN_EXCEEDED;
  }
  return DTM_ERR_INTERNAL;
}

template <class Fn>
dtm_status guarded(Fn&& fn) noexcept {
  try {
    last_error.clear();
    fn();
    return DTM_OK;
  } catch (const dtm::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DTM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DTM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return DTM_ERR_INTERNAL;
  }
}

template <class T>
T& deref(T* p, const char* what) {
  dtm::require(p != nullptr, std::string(what) + " must not be null");
  return *p;
}

dtm::QuadratureOptions convert(const dtm_quadrature_options* o) {
  dtm::QuadratureOptions out;
  if (!o) return out;
  dtm::require(o->node_count >= 0, "node_count must be >= 0");
  dtm::require(o->relative > 0.0 && o->absolute >= 0.0, "error targets must be positive");
  out.node_count = o->node_count;
  out.target = dtm::ErrorTarget{o->relative, o->absolute};
  out.allow_contour_rotation = o->allow_contour_rotation != 0;
  out.allow_panel_fallback = o->allow_panel_fallback != 0;
  return out;
}

dtm::PhysicalConstants convert(const dtm_constants* c) {
  const dtm_constants& ref = deref(c, "constants");
  dtm::PhysicalConstants out{ref.hbar, ref.tau};
  out.validate();
  return out;
}

dtm::SensitivityModel convert(const dtm_sensitivity_model* m) {
  const dtm_sensitivity_model& ref = deref(m, "model");
  dtm::SensitivityModel out{ref.a, ref.b, ref.c};
  out.validate();
  return out;
}

dtm::PhaseState convert(const dtm_phase_state* s) {
  const dtm_phase_state& ref = deref(s, "state");
  dtm::require(ref.dof >= 1 && ref.x && ref.p, "state needs dof >= 1 and coordinate arrays");
  dtm::PhaseState out;
  out.x.assign(ref.x, ref.x + ref.dof);
  out.p.assign(ref.p, ref.p + ref.dof);
  if (ref.masses) {
    out.masses.assign(ref.masses, ref.masses + ref.dof);
  } else {
    out.masses.assign(ref.dof, 1.0);
  }
  out.validate();
  return out;
}

dtm::HamiltonianModel convert(const dtm_model* m) {
  const dtm_model& ref = deref(m, "model");
  switch (ref.kind) {
    case DTM_MODEL_FREE_PARTICLE: return dtm::FreeParticle{};
    case DTM_MODEL_HARMONIC_OSCILLATOR: return dtm::HarmonicOscillator{};
    case DTM_MODEL_CUSTOM: {
      dtm::require(ref.field != nullptr, "custom model needs a vector field");
      const dtm_vector_field field = ref.field;
      void* user = ref.field_user;
      return dtm::CustomField{[field, user](std::span<const double> z, std::span<double> dz) {
        field(z.data(), dz.data(), z.size(), user);
      }};
    }
  }
  dtm::fail(dtm::ErrorCode::InvalidArgument, "unknown model kind");
}

dtm_signal* wrap(dtm::TimeSignal s) { return new dtm_signal{std::move(s)}; }

void copy_estimate(const dtm::LyapunovEstimate& est, dtm_lyapunov_estimate* out, double* abscissa,
                   double* log_distance) {
  if (out) {
    out->exponent = est.exponent;
    out->intercept = est.intercept;
    out->window_lo = est.window_lo;
    out->window_hi = est.window_hi;
    out->residual = est.residual;
    out->points = est.abscissa.size();
    out->first_fitted = est.first_fitted;
  }
  if (abscissa) std::copy(est.abscissa.begin(), est.abscissa.end(), abscissa);
  if (log_distance) std::copy(est.log_distance.begin(), est.log_distance.end(), log_distance);
}

}  // namespace

extern "C" {

const char* dtm_status_name(dtm_status status) {
  switch (status) {
    case DTM_OK: return "Ok";
    case DTM_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case DTM_ERR_DIVERGENT_TRANSFORM: return "DivergentTransform";
    case DTM_ERR_QUADRATURE_NOT_CONVERGED: return "QuadratureNotConverged";
    case DTM_ERR_FIT_UNSTABLE: return "FitUnstable";
    case DTM_ERR_GRID_UNDER_RESOLVED: return "GridUnderResolved";
    case DTM_ERR_BACKWARD_ONLY: return "BackwardOnly";
    case DTM_ERR_STIFFNESS_FAILURE: return "StiffnessFailure";
    case DTM_ERR_INVALID_STATE: return "InvalidState";
    case DTM_ERR_SIGNAL_DOMAIN_EXCEEDED: return "SignalDomainExceeded";
    case DTM_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

int dtm_status_is_numerical(dtm_status status) {
  switch (status) {
    case DTM_ERR_DIVERGENT_TRANSFORM:
    case DTM_ERR_QUADRATURE_NOT_CONVERGED:
    case DTM_ERR_FIT_UNSTABLE:
    case DTM_ERR_STIFFNESS_FAILURE:
    case DTM_ERR_SIGNAL_DOMAIN_EXCEEDED:
      return 1;
    default:
      return 0;
  }
}

const char* dtm_last_error_message(void) { return last_error.c_str(); }

const char* dtm_version(void) { return DTM_VERSION_STRING; }

void dtm_set_thread_count(size_t count) { dtm::set_thread_count(count); }

size_t dtm_get_thread_count(void) { return dtm::thread_count(); }

/* kernel */

dtm_status dtm_gamma_density(int n, double tau, double xi, double xi0, double* out) {
  return guarded([&] { deref(out, "out") = dtm::gamma_density(dtm::GammaKernel(n, tau), xi, xi0); });
}

dtm_status dtm_log_gamma_density(int n, double tau, double xi, double xi0, double* out) {
  return guarded([&] { deref(out, "out") = dtm::log_gamma_density(dtm::GammaKernel(n, tau), xi, xi0); });
}

dtm_status dtm_signal_constant(double value, dtm_signal** out) {
  return guarded([&] { deref(out, "out") = wrap(dtm::TimeSignal::constant(value)); });
}

dtm_status dtm_signal_power(int k, dtm_signal** out) {
  return guarded([&] { deref(out, "out") = wrap(dtm::TimeSignal::power(k)); });
}

dtm_status dtm_signal_cosine(double omega, dtm_signal** out) {
  return guarded([&] { deref(out, "out") = wrap(dtm::TimeSignal::cosine(omega)); });
}

dtm_status dtm_signal_exponential(double rate, dtm_signal** out) {
  return guarded([&] { deref(out, "out") = wrap(dtm::TimeSignal::exponential(rate)); });
}

dtm_status dtm_signal_complex_exponential(double omega, dtm_signal** out) {
  return guarded([&] { deref(out, "out") = wrap(dtm::TimeSignal::complex_exponential(omega)); });
}

dtm_status dtm_signal_tabulated(const double* t, const double* values, size_t count, int order,
                                dtm_signal** out) {
  return guarded([&] {
    dtm::require(t && values && count >= 2, "tabulated signal needs at least two samples");
    deref(out, "out") = wrap(dtm::TimeSignal::tabulated(std::vector<double>(t, t + count),
                                                        std::vector<double>(values, values + count), order));
  });
}

dtm_status dtm_signal_callback(dtm_real_function fn, void* user, dtm_signal** out) {
  return guarded([&] {
    dtm::require(fn != nullptr, "callback must not be null");
    deref(out, "out") = wrap(dtm::TimeSignal::closed_form([fn, user](double t) { return fn(t, user); }, "callback"));
  });
}

dtm_status dtm_signal_with_growth_bound(const dtm_signal* signal, double rate, dtm_signal** out) {
  return guarded([&] {
    const auto& s = deref(signal, "signal");
    deref(out, "out") = wrap(s.signal.with_growth_bound(rate));
  });
}

dtm_status dtm_signal_eval(const dtm_signal* signal, double t, double* re, double* im) {
  return guarded([&] {
    const std::complex<double> v = deref(signal, "signal").signal(t);
    if (re) *re = v.real();
    if (im) *im = v.imag();
  });
}

void dtm_signal_free(dtm_signal* signal) { delete signal; }

void dtm_quadrature_options_default(dtm_quadrature_options* options) {
  if (!options) return;
  const dtm::QuadratureOptions d;
  options->node_count = d.node_count;
  options->relative = d.target.relative;
  options->absolute = d.target.absolute;
  options->allow_contour_rotation = d.allow_contour_rotation ? 1 : 0;
  options->allow_panel_fallback = d.allow_panel_fallback ? 1 : 0;
}

const char* dtm_transform_path_name(dtm_transform_path path) {
  switch (path) {
    case DTM_PATH_IDENTITY: return dtm::transform_path_name(dtm::TransformPath::Identity);
    case DTM_PATH_ROTATED_RAY: return dtm::transform_path_name(dtm::TransformPath::RotatedRay);
    case DTM_PATH_GAUSS_LAGUERRE: return dtm::transform_path_name(dtm::TransformPath::GaussLaguerre);
    case DTM_PATH_ADAPTIVE_PANELS: return dtm::transform_path_name(dtm::TransformPath::AdaptivePanels);
  }
  return "unknown";
}

dtm_status dtm_transform(const dtm_signal* signal, int n, double tau, const dtm_quadrature_options* options,
                         dtm_transform_result* out) {
  return guarded([&] {
    const auto& s = deref(signal, "signal");
    auto& o = deref(out, "out");
    const dtm::TransformResult r = dtm::transform_at_step(s.signal, n, tau, convert(options));
    o.re = r.value.real();
    o.im = r.value.imag();
    o.error_estimate = r.error_estimate;
    o.path = static_cast<dtm_transform_path>(static_cast<int>(r.path));
    o.nodes = r.nodes;
  });
}

dtm_status dtm_transform_monte_carlo(const dtm_signal* signal, int n, double tau, size_t samples, uint64_t seed,
                                     dtm_monte_carlo_result* out) {
  return guarded([&] {
    const auto& s = deref(signal, "signal");
    auto& o = deref(out, "out");
    const dtm::MonteCarloResult r = dtm::transform_monte_carlo(s.signal, dtm::GammaKernel(n, tau), samples, seed);
    o.re = r.estimate.real();
    o.im = r.estimate.imag();
    o.standard_error = r.standard_error;
    o.samples = r.samples;
  });
}

dtm_status dtm_sample_internal_times(int n, double tau, uint64_t seed, size_t count, double* out) {
  return guarded([&] {
    dtm::require(count == 0 || out != nullptr, "out must not be null");
    const dtm::GammaKernel kernel(n, tau);
    dtm::Rng rng(seed);
    for (size_t k = 0; k < count; ++k) out[k] = dtm::sample_internal_time(kernel, rng);
  });
}

dtm_status dtm_scheme_delta_coefficient(double alpha, int n, double* out) {
  return guarded([&] { deref(out, "out") = dtm::scheme_delta_coefficient(dtm::StepScheme(alpha), n); });
}

dtm_status dtm_scheme_decomposition(double alpha, int n, double tau, double* delta_coefficient, double* weights,
                                    int* shapes, size_t capacity, size_t* count, double* scale) {
  return guarded([&] {
    const dtm::SchemeDecomposition d =
        dtm::scheme_density_decomposition(dtm::StepScheme(alpha), dtm::GammaKernel(n, tau));
    if (delta_coefficient) *delta_coefficient = d.delta_coefficient;
    if (count) *count = d.terms.size();
    if (scale) *scale = d.terms.empty() ? 0.0 : d.terms.front().scale;
    for (size_t k = 0; k < d.terms.size() && k < capacity; ++k) {
      if (weights) weights[k] = d.terms[k].weight;
      if (shapes) shapes[k] = d.terms[k].shape;
    }
  });
}

dtm_status dtm_advection_probe(double alpha, int n, double tau, size_t points, double length, double sigma,
                               dtm_probe_summary* out, double* profile) {
  return guarded([&] {
    const dtm::ProbeResult r = dtm::advection_negativity_probe(dtm::StepScheme(alpha), dtm::GammaKernel(n, tau),
                                                               dtm::AdvectionGrid{points, length}, sigma);
    if (out) *out = {r.minimum, r.peak, r.origin};
    if (profile) std::copy(r.profile.begin(), r.profile.end(), profile);
  });
}

/* classical */

dtm_status dtm_moments_closed_form(dtm_model_kind kind, const dtm_phase_state* state, double tau, int max_steps,
                                   dtm_moment_report** out) {
  return guarded([&] {
    auto& o = deref(out, "out");
    const dtm::PhaseState s = convert(state);
    dtm::MomentReport report;
    if (kind == DTM_MODEL_FREE_PARTICLE) {
      report = dtm::free_particle_moments(s, tau, max_steps);
    } else if (kind == DTM_MODEL_HARMONIC_OSCILLATOR) {
      report = dtm::sho_moments(s, tau, max_steps);
    } else {
      dtm::fail(dtm::ErrorCode::InvalidArgument, "closed forms exist only for the free particle and oscillator");
    }
    auto rows = report.rows();
    o = new dtm_moment_report{std::move(report), std::move(rows)};
  });
}

dtm_status dtm_moments_oscillator_scaled(const dtm_phase_state* state, double omega, double tau, int max_steps,
                                         dtm_moment_report** out) {
  return guarded([&] {
    auto& o = deref(out, "out");
    dtm::MomentReport report = dtm::sho_moments_scaled(convert(state), omega, tau, max_steps);
    auto rows = report.rows();
    o = new dtm_moment_report{std::move(report), std::move(rows)};
  });
}

dtm_status dtm_moments_quadrature(const dtm_model* model, const dtm_phase_state* state, double tau, int max_steps,
                                  const dtm_quadrature_options* options, dtm_moment_report** out) {
  return guarded([&] {
    auto& o = deref(out, "out");
    dtm::MomentReport report =
        dtm::quadrature_moments(convert(model), convert(state), tau, max_steps, convert(options));
    auto rows = report.rows();
    o = new dtm_moment_report{std::move(report), std::move(rows)};
  });
}

dtm_status dtm_evolve_observable(const dtm_model* model, const dtm_phase_state* state, dtm_phase_function f,
                                 void* user, double tau, int max_steps, const dtm_quadrature_options* options,
                                 double* out) {
  return guarded([&] {
    dtm::require(f != nullptr && out != nullptr, "phase function and output must not be null");
    const dtm::PhaseFunction fn = [f, user](std::span<const double> x, std::span<const double> p) {
      return f(x.data(), p.data(), x.size(), user);
    };
    const std::vector<double> values =
        dtm::evolve_observable(convert(model), convert(state), fn, tau, max_steps, convert(options));
    std::copy(values.begin(), values.end(), out);
  });
}

size_t dtm_moment_report_dof(const dtm_moment_report* report) { return report ? report->report.dof : 0; }

size_t dtm_moment_report_row_count(const dtm_moment_report* report) { return report ? report->rows.size() : 0; }

dtm_status dtm_moment_report_row(const dtm_moment_report* report, size_t index, dtm_moment_row* out) {
  return guarded([&] {
    const auto& r = deref(report, "report");
    auto& o = deref(out, "out");
    dtm::require(index < r.rows.size(), "row index out of range");
    const dtm::MomentRow& row = r.rows[index];
    o = {row.n, row.i, row.j, row.name.c_str(), row.value};
  });
}

dtm_status dtm_moment_report_value(const dtm_moment_report* report, int n, const char* name, int i, int j,
                                   double* out) {
  return guarded([&] {
    const auto& r = deref(report, "report");
    auto& o = deref(out, "out");
    dtm::require(name != nullptr, "name must not be null");
    dtm::require(n >= 0 && static_cast<size_t>(n) < r.report.steps.size(), "step out of range");
    const dtm::MomentStep& s = r.report.steps[n];
    const std::string key(name);
    const auto l = static_cast<int>(r.report.dof);
    if (key == "energy") {
      o = s.energy;
      return;
    }
    dtm::require(i >= 0 && i < l, "index i out of range");
    const std::vector<double>* single = key == "mean_x"    ? &s.mean_x
                                        : key == "mean_p"  ? &s.mean_p
                                        : key == "mean_x2" ? &s.mean_x2
                                        : key == "mean_p2" ? &s.mean_p2
                                        : key == "var_x"   ? &s.var_x
                                        : key == "var_p"   ? &s.var_p
                                                           : nullptr;
    if (single) {
      o = (*single)[i];
      return;
    }
    dtm::require(j >= 0 && j < l, "index j out of range");
    if (key == "mean_xx") {
      o = s.mean_xx[i * l + j];
    } else if (key == "cov_xx") {
      o = s.cov_xx[i * l + j];
    } else {
      dtm::fail(dtm::ErrorCode::InvalidArgument, "unknown moment name '" + key + "'");
    }
  });
}

dtm_status dtm_moment_report_zero_amplitude(const dtm_moment_report* report, size_t i, int* out) {
  return guarded([&] {
    const auto& r = deref(report, "report");
    dtm::require(i < r.report.zero_amplitude.size(), "index out of range");
    deref(out, "out") = r.report.zero_amplitude[i] ? 1 : 0;
  });
}

void dtm_moment_report_free(dtm_moment_report* report) { delete report; }

/* quantum */

dtm_constants dtm_constants_natural(void) {
  const auto c = dtm::PhysicalConstants::natural();
  return {c.hbar, c.tau};
}

dtm_constants dtm_constants_si_planck(void) {
  const auto c = dtm::PhysicalConstants::si_planck();
  return {c.hbar, c.tau};
}

dtm_status dtm_density_matrix_create(size_t d, const double* energies, const double* re, const double* im,
                                     int project, int* projected, dtm_density_matrix** out) {
  return guarded([&] {
    auto& o = deref(out, "out");
    dtm::require(d >= 1 && energies && re, "density matrix needs d >= 1, energies and real parts");
    std::vector<double> e(energies, energies + d);
    Eigen::MatrixXcd a(d, d);
    for (size_t r = 0; r < d; ++r) {
      for (size_t c = 0; c < d; ++c) a(r, c) = {re[r * d + c], im ? im[r * d + c] : 0.0};
    }
    if (project) {
      bool changed = false;
      o = new dtm_density_matrix{dtm::DensityMatrix::projected(std::move(e), a, &changed)};
      if (projected) *projected = changed ? 1 : 0;
    } else {
      o = new dtm_density_matrix{dtm::DensityMatrix(std::move(e), std::move(a))};
      if (projected) *projected = 0;
    }
  });
}

size_t dtm_density_matrix_dim(const dtm_density_matrix* dm) { return dm ? dm->dm.dim() : 0; }

dtm_status dtm_density_matrix_energies(const dtm_density_matrix* dm, double* out) {
  return guarded([&] {
    const auto& e = deref(dm, "dm").dm.energies();
    dtm::require(out != nullptr, "out must not be null");
    std::copy(e.begin(), e.end(), out);
  });
}

dtm_status dtm_density_matrix_coeffs(const dtm_density_matrix* dm, double* re, double* im) {
  return guarded([&] {
    const auto& a = deref(dm, "dm").dm.coeffs();
    const auto d = a.rows();
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        if (re) re[r * d + c] = a(r, c).real();
        if (im) im[r * d + c] = a(r, c).imag();
      }
    }
  });
}

dtm_status dtm_density_matrix_trace(const dtm_density_matrix* dm, double* out) {
  return guarded([&] { deref(out, "out") = deref(dm, "dm").dm.trace(); });
}

dtm_status dtm_density_matrix_purity(const dtm_density_matrix* dm, double* out) {
  return guarded([&] { deref(out, "out") = deref(dm, "dm").dm.purity(); });
}

dtm_status dtm_density_matrix_min_eigenvalue(const dtm_density_matrix* dm, double* out) {
  return guarded([&] { deref(out, "out") = deref(dm, "dm").dm.min_eigenvalue(); });
}

dtm_status dtm_density_matrix_hermiticity_error(const dtm_density_matrix* dm, double* out) {
  return guarded([&] { deref(out, "out") = deref(dm, "dm").dm.hermiticity_error(); });
}

void dtm_density_matrix_free(dtm_density_matrix* dm) { delete dm; }

dtm_status dtm_evolve_density(const dtm_density_matrix* dm, int n, const dtm_constants* constants,
                              dtm_density_matrix** out) {
  return guarded([&] {
    auto& o = deref(out, "out");
    o = new dtm_density_matrix{dtm::evolve_density(deref(dm, "dm").dm, n, convert(constants))};
  });
}

dtm_status dtm_evolution_factor(int n, double delta_e, const dtm_constants* constants, double* re, double* im) {
  return guarded([&] {
    const std::complex<double> f = dtm::evolution_factor(n, delta_e, convert(constants));
    if (re) *re = f.real();
    if (im) *im = f.imag();
  });
}

dtm_status dtm_decoherence_time(double delta_e, const dtm_constants* constants, double* out) {
  return guarded([&] { deref(out, "out") = dtm::decoherence_time(delta_e, convert(constants)); });
}

dtm_status dtm_offdiagonal_modulus(int n, double delta_e, const dtm_constants* constants, double* out) {
  return guarded([&] { deref(out, "out") = dtm::offdiagonal_modulus(n, delta_e, convert(constants)); });
}

dtm_status dtm_schroedinger_defect(int n, double delta_e, const dtm_constants* constants, double* out) {
  return guarded([&] { deref(out, "out") = dtm::schroedinger_defect(n, delta_e, convert(constants)); });
}

dtm_status dtm_schur_multiplier(size_t d, const double* energies, int n, const dtm_constants* constants, double* re,
                                double* im) {
  return guarded([&] {
    dtm::require(d >= 1 && energies, "energies must not be null");
    const Eigen::MatrixXcd m = dtm::schur_multiplier(std::vector<double>(energies, energies + d), n, convert(constants));
    for (size_t r = 0; r < d; ++r) {
      for (size_t c = 0; c < d; ++c) {
        if (re) re[r * d + c] = m(r, c).real();
        if (im) im[r * d + c] = m(r, c).imag();
      }
    }
  });
}

dtm_status dtm_gamma_equivalence_check(const dtm_density_matrix* dm, int n, const dtm_constants* constants,
                                       const dtm_quadrature_options* options, double* max_deviation,
                                       double* max_error_estimate) {
  return guarded([&] {
    const dtm::EquivalenceResult r =
        dtm::gamma_equivalence_check(deref(dm, "dm").dm, n, convert(constants), convert(options));
    if (max_deviation) *max_deviation = r.max_deviation;
    if (max_error_estimate) *max_error_estimate = r.max_error_estimate;
  });
}

/* nonlinear */

dtm_status dtm_sensitivity_model_make(double a, double c, dtm_sensitivity_model* out) {
  return guarded([&] {
    const dtm::SensitivityModel m = dtm::SensitivityModel::make(a, c);
    deref(out, "out") = {m.a, m.b, m.c};
  });
}

dtm_status dtm_distance_bound(const dtm_sensitivity_model* model, double tau, double* out) {
  return guarded([&] { deref(out, "out") = convert(model).distance_bound(tau); });
}

dtm_status dtm_ct_position(const dtm_sensitivity_model* model, double t, double* out) {
  return guarded([&] { deref(out, "out") = dtm::ct_position(convert(model), t); });
}

dtm_status dtm_ct_distance(const dtm_sensitivity_model* model, double t, double* out) {
  return guarded([&] { deref(out, "out") = dtm::ct_distance(convert(model), t); });
}

dtm_status dtm_dt_distance(const dtm_sensitivity_model* model, int n, double tau, double* distance,
                           double* log_distance) {
  return guarded([&] {
    const double log_d = dtm::dt_log_distance(convert(model), dtm::GammaKernel(n, tau));
    if (distance) *distance = std::exp(log_d);
    if (log_distance) *log_distance = log_d;
  });
}

dtm_status dtm_ct_lyapunov(const dtm_sensitivity_model* model, double t_max, int samples, double max_residual,
                           dtm_lyapunov_estimate* out, double* abscissa, double* log_distance) {
  return guarded([&] {
    copy_estimate(dtm::ct_lyapunov(convert(model), t_max, samples, max_residual), out, abscissa, log_distance);
  });
}

dtm_status dtm_dt_lyapunov(const dtm_sensitivity_model* model, double tau, int n_max, double max_residual,
                           dtm_lyapunov_estimate* out, double* abscissa, double* log_distance) {
  return guarded([&] {
    copy_estimate(dtm::dt_lyapunov(convert(model), tau, n_max, max_residual), out, abscissa, log_distance);
  });
}

dtm_status dtm_power_law_value(double alpha, int n, double tau, double* out) {
  return guarded([&] { deref(out, "out") = dtm::power_law_value(alpha, dtm::GammaKernel(n, tau)); });
}

dtm_status dtm_exponential_map(double rate, double tau, double* out) {
  return guarded([&] { deref(out, "out") = dtm::exponential_map(rate, tau); });
}

}  // extern "C"

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Uses only the public C API (and the CLI binary for the last check).

#include <dtm/dtm.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../run_cli.hpp"

namespace {

using cplx = std::complex<double>;

struct Failed {
  std::string what;
};

void ok(dtm_status s, const char* where) {
  if (s != DTM_OK)
    throw Failed{std::string(where) + ": " + dtm_status_name(s) + " " + dtm_last_error_message()};
}

void expect(bool cond, const std::string& what) {
  if (!cond) throw Failed{what};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Signal {
  dtm_signal* h = nullptr;
  ~Signal() { dtm_signal_free(h); }
};
struct Report {
  dtm_moment_report* h = nullptr;
  ~Report() { dtm_moment_report_free(h); }
};
struct Density {
  dtm_density_matrix* h = nullptr;
  ~Density() { dtm_density_matrix_free(h); }
};

double value(const Report& r, int n, const char* name, int i = 0, int j = 0) {
  double v = 0.0;
  ok(dtm_moment_report_value(r.h, n, name, i, j, &v), name);
  return v;
}

double floored(double got, double want, double floor) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

// ---------------------------------------------------------------------------

std::string gamma_oracles() {
  double worst_pow = 0.0, worst_exp = 0.0;
  for (int k = 0; k <= 6; ++k) {
    Signal s;
    ok(dtm_signal_power(k, &s.h), "power");
    for (int n = 1; n <= 50; ++n)
      for (double tau : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        dtm_transform_result r{};
        ok(dtm_transform(s.h, n, tau, nullptr, &r), "transform");
        worst_pow = std::max(worst_pow, oracle::rel_err(r.re, oracle::power_moment(k, n, tau)));
      }
  }
  for (double w : {0.5, 1.0, 3.0, 10.0}) {
    Signal s;
    ok(dtm_signal_complex_exponential(w, &s.h), "cexp");
    for (int n = 1; n <= 50; ++n)
      for (double tau : {0.01, 0.1, 0.3, 1.0}) {
        dtm_transform_result r{};
        ok(dtm_transform(s.h, n, tau, nullptr, &r), "transform");
        worst_exp = std::max(worst_exp, oracle::rel_err(cplx(r.re, r.im), oracle::cexp_transform(w, n, tau)));
      }
  }
  expect(worst_pow <= 1e-10, "power moment rel err " + fmt(worst_pow));
  expect(worst_exp <= 1e-8, "complex exponential rel err " + fmt(worst_exp));
  return "power " + fmt(worst_pow) + ", exp " + fmt(worst_exp);
}

std::string free_particle() {
  const double x[] = {0.3, -1.0, 2.0}, p[] = {1.5, -0.7, 2.0}, m[] = {1.0, 2.5, 0.5};
  const dtm_phase_state st{3, x, p, m};
  const double tau = 0.3;
  const int steps = 40;
  Report closed, quad;
  ok(dtm_moments_closed_form(DTM_MODEL_FREE_PARTICLE, &st, tau, steps, &closed.h), "closed form");
  const dtm_model model{DTM_MODEL_FREE_PARTICLE, nullptr, nullptr};
  ok(dtm_moments_quadrature(&model, &st, tau, steps, nullptr, &quad.h), "quadrature");
  double exact = 0.0, via_quad = 0.0, cross = 0.0, p2 = 0.0;
  for (int n = 0; n <= steps; ++n)
    for (int i = 0; i < 3; ++i) {
      const double v = p[i] / m[i];
      const double want = n * v * v * tau * tau;
      exact = std::max(exact, std::abs(value(closed, n, "var_x", i) - want));
      via_quad = std::max(via_quad, floored(value(quad, n, "var_x", i), want, v * v * tau * tau));
      p2 = std::max(p2, std::abs(value(closed, n, "mean_p2", i) - p[i] * p[i]));
      p2 = std::max(p2, floored(value(quad, n, "mean_p2", i), p[i] * p[i], 1.0));
      for (int j = 0; j < 3; ++j) {
        const double cw = n * tau * tau * v * p[j] / m[j];
        cross = std::max(cross, floored(value(closed, n, "cov_xx", i, j), cw, tau * tau));
        cross = std::max(cross, floored(value(quad, n, "cov_xx", i, j), cw, tau * tau));
      }
    }
  expect(exact <= 1e-12, "closed-form variance off by " + fmt(exact));
  expect(via_quad <= 1e-7, "quadrature variance rel err " + fmt(via_quad));
  expect(cross <= 1e-7, "cross covariance rel err " + fmt(cross));
  expect(p2 <= 1e-12, "<p^2> drift " + fmt(p2));
  return "var exact " + fmt(exact) + ", var quad " + fmt(via_quad) + ", cov " + fmt(cross);
}

std::string oscillator() {
  const double x[] = {0.7, -0.2}, p[] = {0.1, 0.9};
  const dtm_phase_state st{2, x, p, nullptr};
  const dtm_model model{DTM_MODEL_HARMONIC_OSCILLATOR, nullptr, nullptr};
  double worst = 0.0, energy = 0.0;
  for (double tau : {0.05, 0.1, 0.25, 0.5}) {
    const int steps = 50;
    Report closed, quad;
    ok(dtm_moments_closed_form(DTM_MODEL_HARMONIC_OSCILLATOR, &st, tau, steps, &closed.h), "closed form");
    ok(dtm_moments_quadrature(&model, &st, tau, steps, nullptr, &quad.h), "quadrature");
    for (int n = 0; n <= steps; ++n) {
      for (int i = 0; i < 2; ++i) {
        const double r2 = x[i] * x[i] + p[i] * p[i];
        // near-zero moments are compared against a floor of 1e-3 r^2
        for (const char* name : {"mean_x", "mean_p", "mean_x2", "mean_p2"})
          worst = std::max(worst, floored(value(quad, n, name, i), value(closed, n, name, i), 1e-3 * r2));
        energy = std::max(energy, std::abs(value(closed, n, "mean_x2", i) + value(closed, n, "mean_p2", i) - r2));
      }
      const double rr = std::sqrt((x[0] * x[0] + p[0] * p[0]) * (x[1] * x[1] + p[1] * p[1]));
      worst = std::max(worst, floored(value(quad, n, "mean_xx", 0, 1), value(closed, n, "mean_xx", 0, 1), 1e-3 * rr));
    }
  }
  expect(worst <= 1e-7, "quadrature vs closed form rel err " + fmt(worst));
  expect(energy <= 1e-12, "energy drift " + fmt(energy));
  return "max rel " + fmt(worst) + ", energy " + fmt(energy);
}

std::string decoherence() {
  const dtm_constants si = dtm_constants_si_planck();
  expect(std::abs(si.tau - 5.4e-44) <= 1e-50, "time quantum is " + fmt(si.tau));
  const double ev = 1.602176634e-19, year = 3.15576e7;
  double td = 0.0, hot = 0.0;
  ok(dtm_decoherence_time(7e-3 * ev, &si, &td), "td");
  ok(dtm_decoherence_time(7e-3 * ev * 1e20, &si, &hot), "td hot");
  expect(td / year > 1e10, "T_d = " + fmt(td / year) + " yr");
  expect(hot >= 1e-23 && hot <= 1e-22, "T_d(1e20) = " + fmt(hot) + " s");
  return "T_d " + fmt(td / year) + " yr, scaled " + fmt(hot) + " s";
}

std::string quantum_suite() {
  oracle::Gen g(4242);
  const dtm_constants nat = dtm_constants_natural();
  double worst_trace = 0.0, worst_herm = 0.0, worst_min = 0.0, worst_semi = 0.0, worst_eq = 0.0;
  bool monotone = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = g.integer(2, 8);
    std::vector<double> re, im, e(d);
    oracle::random_density(g, d, re, im, g.integer(1, d));
    for (auto& v : e) v = g.uniform(-3.0, 3.0);
    Density dm;
    ok(dtm_density_matrix_create(d, e.data(), re.data(), im.data(), 0, nullptr, &dm.h), "create");
    double last = 0.0;
    ok(dtm_density_matrix_purity(dm.h, &last), "purity");
    for (int n : {1, 2, 5, 20, 50, 100}) {
      Density out;
      ok(dtm_evolve_density(dm.h, n, &nat, &out.h), "evolve");
      double tr = 0, herm = 0, mn = 0, pur = 0;
      ok(dtm_density_matrix_trace(out.h, &tr), "trace");
      ok(dtm_density_matrix_hermiticity_error(out.h, &herm), "herm");
      ok(dtm_density_matrix_min_eigenvalue(out.h, &mn), "eig");
      ok(dtm_density_matrix_purity(out.h, &pur), "purity");
      worst_trace = std::max(worst_trace, std::abs(tr - 1.0));
      worst_herm = std::max(worst_herm, herm);
      worst_min = std::min(worst_min, mn);
      monotone = monotone && pur <= last + 1e-15;
      last = pur;
    }
    const int n1 = g.integer(0, 50), n2 = g.integer(0, 50);
    Density a, ab, once;
    ok(dtm_evolve_density(dm.h, n1, &nat, &a.h), "evolve");
    ok(dtm_evolve_density(a.h, n2, &nat, &ab.h), "evolve");
    ok(dtm_evolve_density(dm.h, n1 + n2, &nat, &once.h), "evolve");
    std::vector<double> r1(d * d), i1(d * d), r2(d * d), i2(d * d);
    ok(dtm_density_matrix_coeffs(ab.h, r1.data(), i1.data()), "coeffs");
    ok(dtm_density_matrix_coeffs(once.h, r2.data(), i2.data()), "coeffs");
    for (int k = 0; k < d * d; ++k) worst_semi = std::max(worst_semi, std::abs(cplx(r1[k] - r2[k], i1[k] - i2[k])));

    double dev = 0.0, est = 0.0;
    ok(dtm_gamma_equivalence_check(dm.h, g.integer(1, 100), &nat, nullptr, &dev, &est), "equivalence");
    worst_eq = std::max(worst_eq, dev);
  }
  expect(worst_trace <= 1e-12, "trace error " + fmt(worst_trace));
  expect(worst_herm <= 1e-12, "hermiticity error " + fmt(worst_herm));
  expect(worst_min >= -1e-10, "min eigenvalue " + fmt(worst_min));
  expect(monotone, "purity increased");
  expect(worst_semi <= 1e-12, "semigroup error " + fmt(worst_semi));
  expect(worst_eq <= 1e-8, "gamma equivalence deviation " + fmt(worst_eq));
  return "trace " + fmt(worst_trace) + ", semigroup " + fmt(worst_semi) + ", equivalence " + fmt(worst_eq);
}

std::string defect() {
  const dtm_constants nat = dtm_constants_natural();
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n)
    for (int k = 0; k < 20; ++k) {
      const double de = k == 0 ? 0.0 : std::pow(10.0, -4.0 + 0.4 * k);
      double v = -1.0;
      ok(dtm_schroedinger_defect(n, de, &nat, &v), "defect");
      const double want = 0.5 * n * std::log1p(de * de);
      if (de == 0.0)
        expect(v == 0.0, "nonzero defect at zero gap");
      else
        expect(v > 0.0, "defect not positive at n=" + std::to_string(n) + " gap " + fmt(de));
      worst = std::max(worst, floored(v, want, 1e-300));
    }
  expect(worst <= 1e-13, "defect rel err " + fmt(worst));
  return "400 grid points, rel err " + fmt(worst);
}

std::string scheme_negativity() {
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9})
    for (int n = 1; n <= 9; n += 2) {
      double c = 0.0;
      ok(dtm_scheme_delta_coefficient(a, n, &c), "delta");
      const double want = -std::pow(a / (1.0 - a), n);
      expect(c < 0.0, "delta coefficient not negative at alpha " + fmt(a));
      expect(floored(c, want, 1e-300) <= 1e-14, "delta coefficient " + fmt(c) + " vs " + fmt(want));
    }
  dtm_probe_summary half{};
  ok(dtm_advection_probe(0.5, 1, 1.0, 32768, 16.0, 0.01, &half, nullptr), "probe");
  expect(half.minimum < 0.0, "alpha 1/2 probe minimum " + fmt(half.minimum));
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    dtm_probe_summary back{};
    ok(dtm_advection_probe(0.0, n, 1.0, 8192, 32.0, 0.1, &back, nullptr), "probe");
    expect(back.minimum >= -1e-8 * back.peak, "alpha 0 probe minimum " + fmt(back.minimum) + " at n=" + std::to_string(n));
    worst = std::min(worst, back.minimum / back.peak);
  }
  return "alpha 1/2 min " + fmt(half.minimum) + ", alpha 0 min/peak " + fmt(worst);
}

std::string lyapunov() {
  dtm_sensitivity_model m{};
  ok(dtm_sensitivity_model_make(0.5, 1.0, &m), "model");
  const double tau = 0.1;
  dtm_lyapunov_estimate ct{}, dt{};
  ok(dtm_ct_lyapunov(&m, 20.0, 4001, 3.0, &ct, nullptr, nullptr), "ct fit");
  double bound = 0.0, over = -std::numeric_limits<double>::infinity();
  ok(dtm_distance_bound(&m, tau, &bound), "bound");
  for (int n = 1; n <= 200; ++n) {
    double d = 0.0;
    ok(dtm_dt_distance(&m, n, tau, &d, nullptr), "distance");
    over = std::max(over, d - bound);
  }
  double cmap = 0.0;
  ok(dtm_exponential_map(0.5 / tau, tau, &cmap), "exp map");
  double pl = 0.0;
  ok(dtm_power_law_value(0.5, 100, 1.0, &pl), "power law");
  const dtm_status fit = dtm_dt_lyapunov(&m, tau, 200, 3.0, &dt, nullptr, nullptr);

  std::string detail = "ct " + fmt(ct.exponent) + ", bound margin " + fmt(-over) + ", c " + fmt(cmap) +
                       ", power ratio " + fmt(pl / 10.0);
  expect(ct.exponent >= 0.95 && ct.exponent <= 1.05, "continuous exponent " + fmt(ct.exponent));
  expect(over <= 0.0, "d_dt above bound by " + fmt(over));
  expect(std::abs(cmap - std::log(2.0) / tau) <= 1e-12 * cmap && cmap > 0.5 / tau, "exponential map c = " + fmt(cmap));
  expect(std::abs(pl / 10.0 - 1.0) <= 0.01, "power-law ratio " + fmt(pl / 10.0));
  ok(fit, "dt fit");
  detail += ", dt " + fmt(dt.exponent) + " (residual " + fmt(dt.residual) + ")";
  expect(std::abs(dt.exponent) <= 0.02, "discrete exponent " + fmt(dt.exponent) + "; " + detail);
  return detail;
}

std::string continuum() {
  const double t = 1.0;
  const std::vector<double> taus = {1e-1, 1e-2, 1e-3};
  std::string detail;
  auto decreasing = [&](const char* label, const std::function<double(double, int)>& err) {
    double prev = std::numeric_limits<double>::infinity();
    detail += std::string(detail.empty() ? "" : "; ") + label;
    for (double tau : taus) {
      const int n = static_cast<int>(std::lround(t / tau));
      const double e = err(tau, n);
      detail += " " + fmt(e);
      expect(e < prev, std::string(label) + " error not decreasing: " + detail);
      prev = e;
    }
  };

  Signal cosine;
  ok(dtm_signal_cosine(1.0, &cosine.h), "cos");
  decreasing("transform", [&](double tau, int n) {
    dtm_transform_result r{};
    ok(dtm_transform(cosine.h, n, tau, nullptr, &r), "transform");
    return std::abs(r.re - std::cos(t));
  });

  const double x[] = {1.0}, p[] = {0.5};
  const dtm_phase_state st{1, x, p, nullptr};
  decreasing("oscillator <x>", [&](double tau, int n) {
    Report r;
    ok(dtm_moments_closed_form(DTM_MODEL_HARMONIC_OSCILLATOR, &st, tau, n, &r.h), "sho");
    return std::abs(value(r, n, "mean_x") - (std::cos(t) + 0.5 * std::sin(t)));
  });
  decreasing("free var x", [&](double tau, int n) {
    Report r;
    ok(dtm_moments_closed_form(DTM_MODEL_FREE_PARTICLE, &st, tau, n, &r.h), "free");
    return std::abs(value(r, n, "var_x"));
  });
  decreasing("quantum factor", [&](double tau, int n) {
    const dtm_constants c{1.0, tau};
    double re = 0.0, im = 0.0;
    ok(dtm_evolution_factor(n, 1.0, &c, &re, &im), "factor");
    return std::abs(cplx(re, im) - std::exp(cplx(0.0, -t)));
  });
  return detail;
}

std::string cli_determinism() {
  const std::vector<std::string> commands = {
      "--seed 11 transform --signal exp:-0.3 --n 1:20 --method monte-carlo --samples 20000",
      "--seed 11 --format json transform --signal cexp:2 --n 1:20 --method monte-carlo --samples 20000",
      "--seed 11 chaos --mode dt --n-max 100 --max-residual inf",
      "--seed 11 alpha-scan --alphas 0,0.5 --n 1:4 --sigma 0.05 --points 4096",
  };
  auto body = [](const CliRun& r) {
    // JSON carries a creation timestamp under meta; compare the data part only.
    const auto pos = r.out.find("\"data\"");
    return pos == std::string::npos ? r.out : r.out.substr(pos);
  };
  for (const auto& c : commands) {
    const auto a = run_cli(c, "DTMECH_THREADS=1");
    const auto b = run_cli(c, "DTMECH_THREADS=8");
    const auto again = run_cli(c, "DTMECH_THREADS=8");
    expect(a.code == 0, "exit " + std::to_string(a.code) + " for: " + c + " " + a.err);
    expect(!a.out.empty(), "empty payload for: " + c);
    expect(body(a) == body(b), "thread count changed payload: " + c);
    expect(body(b) == body(again), "repeat run changed payload: " + c);
  }
  return std::to_string(commands.size()) + " commands, 1 vs 8 threads, repeated";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> all = {
      {1, "gamma transform oracles", 5.0, gamma_oracles},
      {2, "free particle moments", 5.0, free_particle},
      {3, "oscillator moments", 10.0, oscillator},
      {4, "decoherence times", 1.0, decoherence},
      {5, "density matrix properties", 30.0, quantum_suite},
      {6, "phase defect", 1.0, defect},
      {7, "scheme negativity", 10.0, scheme_negativity},
      {8, "sensitivity contrast", 30.0, lyapunov},
      {9, "continuum limit", 10.0, continuum},
      {10, "cli determinism", 10.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    try {
      detail = c.run();
    } catch (const Failed& f) {
      pass = false;
      detail = f.what;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) {
      pass = false;
      detail += "; over time budget " + fmt(c.budget) + " s";
    }
    failures += !pass;
    std::printf("criterion %2d %-28s %s  (%.2f s)  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace dtmech {

void check(dtm_status status) {
  if (status != DTM_OK) throw ApiError(status, dtm_last_error_message());
}

dtm_constants GlobalOptions::constants() const {
  return preset_kind() == Preset::si_planck ? dtm_constants_si_planck() : dtm_constants_natural();
}

dtm_quadrature_options QuadratureFlags::to_options() const {
  dtm_quadrature_options q;
  dtm_quadrature_options_default(&q);
  q.node_count = nodes;
  q.relative = rel_tol;
  q.absolute = abs_tol;
  return q;
}

namespace {

struct SignalFree {
  void operator()(dtm_signal* s) const { dtm_signal_free(s); }
};
struct ReportFree {
  void operator()(dtm_moment_report* r) const { dtm_moment_report_free(r); }
};
struct MatrixFree {
  void operator()(dtm_density_matrix* m) const { dtm_density_matrix_free(m); }
};
using SignalPtr = std::unique_ptr<dtm_signal, SignalFree>;
using ReportPtr = std::unique_ptr<dtm_moment_report, ReportFree>;
using MatrixPtr = std::unique_ptr<dtm_density_matrix, MatrixFree>;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

// splitmix64 finalizer; gives each n its own stream from the run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (n + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double time_or_preset(const GlobalOptions& g, const std::string& text) {
  if (text.empty()) return g.constants().tau;
  const double tau = parse_quantity(text, Dimension::time, g.preset_kind());
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  return tau;
}

// ---- signals

SignalPtr read_table_signal(const std::string& path, int order) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read signal table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UsageError("signal table '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  std::size_t ct = 0, cf = 1;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == "t") ct = k;
    if (header[k] == "F") cf = k;
  }
  if (header.size() < 2 || ct == cf) throw UsageError("signal table needs columns t and F");
  std::vector<double> t, f;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() <= std::max(ct, cf)) throw UsageError(path + ":" + std::to_string(row) + ": missing column");
    t.push_back(parse_real(cells[ct], "table t"));
    f.push_back(parse_real(cells[cf], "table F"));
  }
  dtm_signal* s = nullptr;
  check(dtm_signal_tabulated(t.data(), f.data(), t.size(), order, &s));
  return SignalPtr(s);
}

SignalPtr make_signal(const std::string& spec, int table_order) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const bool has_arg = colon != std::string::npos;
  dtm_signal* s = nullptr;
  if (kind == "const") {
    check(dtm_signal_constant(has_arg ? parse_real(arg, "const") : 1.0, &s));
  } else if (kind == "poly") {
    if (!has_arg) throw UsageError("poly needs a degree, e.g. poly:3");
    check(dtm_signal_power(static_cast<int>(parse_integer(arg, "poly degree")), &s));
  } else if (kind == "cos") {
    check(dtm_signal_cosine(has_arg ? parse_real(arg, "cos frequency") : 1.0, &s));
  } else if (kind == "exp") {
    if (!has_arg) throw UsageError("exp needs a rate, e.g. exp:-0.5");
    check(dtm_signal_exponential(parse_real(arg, "exp rate"), &s));
  } else if (kind == "cexp") {
    check(dtm_signal_complex_exponential(has_arg ? parse_real(arg, "cexp frequency") : 1.0, &s));
  } else if (kind == "table") {
    if (arg.empty()) throw UsageError("table needs a file, e.g. table:signal.csv");
    return read_table_signal(arg, table_order);
  } else {
    throw UsageError("unknown signal '" + spec + "' (const, poly:k, cos:w, exp:b, cexp:w, table:file)");
  }
  return SignalPtr(s);
}

// ---- density matrix files

struct MatrixInput {
  Json energies_as_given;
  std::string energy_unit;
  std::vector<double> energies;  // library units
  std::vector<double> re, im;
  std::size_t dim = 0;
};

std::vector<double> read_square(const Json& rows, std::size_t d, const char* what) {
  if (!rows.is_array() || rows.size() != d) throw UsageError(std::string(what) + " must have one row per energy");
  std::vector<double> out;
  out.reserve(d * d);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != d) throw UsageError(std::string(what) + " must be square");
    for (const auto& v : row) {
      if (!v.is_number()) throw UsageError(std::string(what) + " entries must be numbers");
      out.push_back(v.get<double>());
    }
  }
  return out;
}

MatrixInput read_matrix(const GlobalOptions& g, const std::string& path) {
  if (path.empty()) throw UsageError("--input density matrix JSON is required");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  // Accept our own output envelope as input.
  if (doc.contains("data") && doc["data"].is_object()) doc = doc["data"];
  if (!doc.contains("energies") || !doc["energies"].is_array() || doc["energies"].empty())
    throw UsageError(path + ": missing energies[]");
  MatrixInput m;
  m.energies_as_given = doc["energies"];
  m.dim = m.energies_as_given.size();
  if (doc.contains("energy_unit")) m.energy_unit = doc["energy_unit"].get<std::string>();
  double factor = 1.0;
  if (g.preset_kind() == Preset::si_planck) {
    if (m.energy_unit.empty()) throw UsageError(path + ": energy_unit (meV, eV or J) is required in SI mode");
    factor = energy_unit_factor(m.energy_unit);
  } else if (!m.energy_unit.empty() && m.energy_unit != "natural") {
    throw UsageError(path + ": energy_unit '" + m.energy_unit + "' needs --preset si-planck");
  }
  for (const auto& e : m.energies_as_given) {
    if (!e.is_number()) throw UsageError(path + ": energies must be numbers");
    m.energies.push_back(e.get<double>() * factor);
  }
  if (!doc.contains("re")) throw UsageError(path + ": missing re[][]");
  m.re = read_square(doc["re"], m.dim, "re");
  m.im = doc.contains("im") ? read_square(doc["im"], m.dim, "im") : std::vector<double>(m.dim * m.dim, 0.0);
  return m;
}

MatrixPtr load_matrix(const MatrixInput& m, bool project, Json& summary) {
  dtm_density_matrix* dm = nullptr;
  int projected = 0;
  check(dtm_density_matrix_create(m.dim, m.energies.data(), m.re.data(), m.im.data(), project ? 1 : 0, &projected,
                                  &dm));
  if (projected) std::cerr << "warning=Projected message=\"input density matrix replaced by nearest valid state\"\n";
  summary["projected"] = projected != 0;
  return MatrixPtr(dm);
}

std::vector<double> energies_from_flags(const GlobalOptions& g, const QuantumOptions& o) {
  if (o.delta_e.empty()) throw UsageError("--delta-e is required");
  std::vector<double> out;
  for (const auto& item : o.delta_e)
    for (const auto& piece : split(item, ',')) out.push_back(o.scale * parse_quantity(piece, Dimension::energy, g.preset_kind()));
  return out;
}

Json rows_tree(const Payload& p) {
  Json data = Json::object();
  data["rows"] = table_to_json(p.table);
  for (auto it = p.summary.begin(); it != p.summary.end(); ++it) data[it.key()] = it.value();
  return data;
}

}  // namespace

std::vector<int> parse_steps(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty() || parts.size() > 3) throw UsageError("step range '" + text + "' (use n, a:b or a:b:step)");
  const long long a = parse_integer(parts[0], "n");
  const long long b = parts.size() > 1 ? parse_integer(parts[1], "n") : a;
  const long long step = parts.size() > 2 ? parse_integer(parts[2], "n step") : 1;
  if (a < 0 || b < a || step <= 0 || b > 1'000'000) throw UsageError("bad step range '" + text + "'");
  std::vector<int> out;
  for (long long n = a; n <= b; n += step) out.push_back(static_cast<int>(n));
  return out;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  // a:b:step (inclusive, step counted from a) or a comma list
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError(std::string(what) + ": range must be a:b:step");
    const double a = parse_real(parts[0], what), b = parse_real(parts[1], what), h = parse_real(parts[2], what);
    if (!(h > 0.0) || b < a) throw UsageError(std::string(what) + ": bad range '" + text + "'");
    const long count = std::lround(std::floor((b - a) / h + 1e-9)) + 1;
    std::vector<double> out;
    for (long k = 0; k < count; ++k) out.push_back(a + k * h);
    return out;
  }
  std::vector<double> out;
  for (const auto& piece : split(text, ',')) out.push_back(parse_real(piece, what));
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

Payload run_transform(const GlobalOptions& g, const TransformOptions& o) {
  if (o.signal.empty()) throw UsageError("--signal is required");
  const SignalPtr signal = make_signal(o.signal, o.table_order);
  const double tau = time_or_preset(g, o.tau);
  const auto steps = parse_steps(o.n);
  Payload p;
  if (o.method == "quadrature") {
    const auto opts = o.quad.to_options();
    p.table.columns = {"n", "value", "value_im", "error_estimate", "path", "nodes"};
    for (int n : steps) {
      dtm_transform_result r{};
      check(dtm_transform(signal.get(), n, tau, &opts, &r));
      p.table.add({static_cast<long long>(n), r.re, r.im, r.error_estimate, std::string(dtm_transform_path_name(r.path)),
                   static_cast<long long>(r.nodes)});
    }
  } else if (o.method == "monte-carlo") {
    p.table.columns = {"n", "value", "value_im", "standard_error", "samples"};
    for (int n : steps) {
      dtm_monte_carlo_result r{};
      check(dtm_transform_monte_carlo(signal.get(), n, tau, o.samples, mix_seed(g.seed, n), &r));
      p.table.add({static_cast<long long>(n), r.re, r.im, r.standard_error, static_cast<long long>(r.samples)});
    }
  } else {
    throw UsageError("--method must be quadrature or monte-carlo");
  }
  p.summary["tau"] = tau;
  p.tree = rows_tree(p);
  return p;
}

Payload run_classical(const GlobalOptions& g, const ClassicalOptions& o) {
  const auto x = parse_list(o.x, "x");
  const auto pm = parse_list(o.p, "p");
  if (x.size() != pm.size()) throw UsageError("--x and --p need the same number of entries");
  std::vector<double> masses;
  if (!o.masses.empty()) {
    masses = parse_list(o.masses, "masses");
    if (masses.size() != x.size()) throw UsageError("--masses needs one entry per degree of freedom");
  }
  const bool unit_masses = masses.empty() || std::all_of(masses.begin(), masses.end(), [](double m) { return m == 1.0; });
  if (o.steps < 0) throw UsageError("--steps must be non-negative");
  const double tau = time_or_preset(g, o.tau);
  const dtm_phase_state state{x.size(), x.data(), pm.data(), masses.empty() ? nullptr : masses.data()};

  dtm_moment_report* raw = nullptr;
  if (o.model != "free" && o.model != "sho") throw UsageError("--model must be free or sho");
  const dtm_model_kind kind = o.model == "free" ? DTM_MODEL_FREE_PARTICLE : DTM_MODEL_HARMONIC_OSCILLATOR;
  if (kind == DTM_MODEL_FREE_PARTICLE && o.omega != 1.0) throw UsageError("--omega applies to the oscillator only");
  if (o.method == "closed-form") {
    if (kind == DTM_MODEL_HARMONIC_OSCILLATOR && (o.omega != 1.0 || !unit_masses))
      check(dtm_moments_oscillator_scaled(&state, o.omega, tau, o.steps, &raw));
    else
      check(dtm_moments_closed_form(kind, &state, tau, o.steps, &raw));
  } else if (o.method == "quadrature") {
    if (kind == DTM_MODEL_HARMONIC_OSCILLATOR && (o.omega != 1.0 || !unit_masses))
      throw UsageError("quadrature oscillator uses unit frequency and unit masses");
    const dtm_model model{kind, nullptr, nullptr};
    const auto opts = o.quad.to_options();
    check(dtm_moments_quadrature(&model, &state, tau, o.steps, &opts, &raw));
  } else {
    throw UsageError("--method must be closed-form or quadrature");
  }
  const ReportPtr report(raw);

  Payload p;
  p.table.columns = {"n", "i", "j", "moment_name", "value"};
  const std::size_t rows = dtm_moment_report_row_count(report.get());
  for (std::size_t k = 0; k < rows; ++k) {
    dtm_moment_row r{};
    check(dtm_moment_report_row(report.get(), k, &r));
    p.table.add({static_cast<long long>(r.n), static_cast<long long>(r.i), static_cast<long long>(r.j),
                 std::string(r.name), r.value});
  }
  Json zero = Json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    int z = 0;
    check(dtm_moment_report_zero_amplitude(report.get(), i, &z));
    zero.push_back(z != 0);
  }
  p.summary["tau"] = tau;
  p.summary["zero_amplitude"] = zero;
  p.tree = rows_tree(p);
  return p;
}

Payload run_quantum_evolve(const GlobalOptions& g, const QuantumOptions& o) {
  const MatrixInput in = read_matrix(g, o.input);
  const auto steps = parse_steps(o.n);
  if (steps.size() != 1) throw UsageError("evolve takes a single --n");
  Payload p;
  const MatrixPtr dm = load_matrix(in, o.project, p.summary);
  const dtm_constants k = g.constants();
  dtm_density_matrix* raw = nullptr;
  check(dtm_evolve_density(dm.get(), steps[0], &k, &raw));
  const MatrixPtr out(raw);
  const std::size_t d = in.dim;
  std::vector<double> re(d * d), im(d * d);
  check(dtm_density_matrix_coeffs(out.get(), re.data(), im.data()));

  p.table.columns = {"n", "row", "col", "re", "im"};
  Json jre = Json::array(), jim = Json::array();
  for (std::size_t r = 0; r < d; ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (std::size_t c = 0; c < d; ++c) {
      p.table.add({static_cast<long long>(steps[0]), static_cast<long long>(r), static_cast<long long>(c),
                   re[r * d + c], im[r * d + c]});
      rr.push_back(re[r * d + c]);
      ri.push_back(im[r * d + c]);
    }
    jre.push_back(rr);
    jim.push_back(ri);
  }
  double purity = 0.0;
  check(dtm_density_matrix_purity(out.get(), &purity));
  p.summary["purity"] = purity;

  // Same shape as the input file, so the data section can be fed back in.
  p.tree = Json::object();
  p.tree["n"] = steps[0];
  if (!in.energy_unit.empty()) p.tree["energy_unit"] = in.energy_unit;
  p.tree["energies"] = in.energies_as_given;
  p.tree["re"] = jre;
  p.tree["im"] = jim;
  for (auto it = p.summary.begin(); it != p.summary.end(); ++it) p.tree[it.key()] = it.value();
  return p;
}

Payload run_quantum_td(const GlobalOptions& g, const QuantumOptions& o) {
  const auto energies = energies_from_flags(g, o);
  const dtm_constants k = g.constants();
  const bool si = g.preset_kind() == Preset::si_planck;
  constexpr double kYear = 3.15576e7;
  Payload p;
  p.table.columns = {"delta_e", "decoherence_time"};
  if (si) {
    p.table.columns.insert(p.table.columns.end(),
                           {"decoherence_time_years", "exceeds_1e10_years", "within_1e-23_to_1e-22_s"});
  }
  for (double de : energies) {
    double td = 0.0;
    check(dtm_decoherence_time(de, &k, &td));
    std::vector<Cell> row{de, td};
    if (si) {
      row.emplace_back(td / kYear);
      row.emplace_back(td / kYear > 1e10);
      row.emplace_back(td >= 1e-23 && td <= 1e-22);
    }
    p.table.add(std::move(row));
  }
  p.summary["hbar"] = k.hbar;
  p.summary["tau"] = k.tau;
  p.tree = rows_tree(p);
  return p;
}

Payload run_quantum_equivalence(const GlobalOptions& g, const QuantumOptions& o) {
  const MatrixInput in = read_matrix(g, o.input);
  Payload p;
  const MatrixPtr dm = load_matrix(in, o.project, p.summary);
  const dtm_constants k = g.constants();
  const auto opts = o.quad.to_options();
  p.table.columns = {"n", "max_deviation", "error_estimate"};
  for (int n : parse_steps(o.n)) {
    double dev = 0.0, err = 0.0;
    check(dtm_gamma_equivalence_check(dm.get(), n, &k, &opts, &dev, &err));
    p.table.add({static_cast<long long>(n), dev, err});
  }
  p.tree = rows_tree(p);
  return p;
}

Payload run_quantum_defect(const GlobalOptions& g, const QuantumOptions& o) {
  const auto energies = energies_from_flags(g, o);
  const dtm_constants k = g.constants();
  Payload p;
  p.table.columns = {"n", "delta_e", "defect"};
  for (int n : parse_steps(o.n)) {
    for (double de : energies) {
      double v = 0.0;
      check(dtm_schroedinger_defect(n, de, &k, &v));
      p.table.add({static_cast<long long>(n), de, v});
    }
  }
  p.tree = rows_tree(p);
  return p;
}

Payload run_chaos(const GlobalOptions&, const ChaosOptions& o) {
  dtm_sensitivity_model model{};
  check(dtm_sensitivity_model_make(o.a, o.c, &model));
  dtm_lyapunov_estimate est{};
  std::vector<double> abscissa, logd;
  const bool ct = o.mode == "ct";
  if (ct) {
    if (o.samples < 3) throw UsageError("--samples must be at least 3");
    abscissa.resize(o.samples);
    logd.resize(o.samples);
    check(dtm_ct_lyapunov(&model, o.t_max, o.samples, o.max_residual, &est, abscissa.data(), logd.data()));
  } else if (o.mode == "dt") {
    if (o.n_max < 2) throw UsageError("--n-max must be at least 2");
    abscissa.resize(o.n_max);
    logd.resize(o.n_max);
    check(dtm_dt_lyapunov(&model, o.tau, o.n_max, o.max_residual, &est, abscissa.data(), logd.data()));
  } else {
    throw UsageError("--mode must be ct or dt");
  }
  Payload p;
  p.table.columns = {"n_or_t", "distance", "log_distance", "fitted_line"};
  for (std::size_t k = 0; k < abscissa.size(); ++k) {
    const Cell where = ct ? Cell(abscissa[k]) : Cell(static_cast<long long>(k + 1));
    p.table.add({where, std::exp(logd[k]), logd[k], std::exp(est.intercept + est.exponent * abscissa[k])});
  }
  Json fit = Json::object();
  fit["exponent"] = est.exponent;
  fit["intercept"] = est.intercept;
  fit["residual"] = est.residual;
  fit["window"] = Json::array({est.window_lo, est.window_hi});
  fit["abscissa"] = ct ? "t" : "n tau";
  p.summary["fit"] = fit;
  if (!ct) {
    double bound = 0.0;
    check(dtm_distance_bound(&model, o.tau, &bound));
    p.summary["distance_bound"] = bound;
  }
  p.tree = rows_tree(p);
  return p;
}

Payload run_alpha_scan(const GlobalOptions&, const AlphaScanOptions& o) {
  const auto alphas = parse_list(o.alphas, "alpha");
  const auto steps = parse_steps(o.n);
  if (!(o.tau > 0.0) || !(o.sigma > 0.0)) throw UsageError("--tau and --sigma must be positive");
  double length = o.length;
  if (length <= 0.0) length = steps.back() * o.tau + 40.0 * o.sigma;
  Payload p;
  p.table.columns = {"alpha", "n", "delta_coeff", "grid_min", "grid_peak"};
  for (double alpha : alphas) {
    for (int n : steps) {
      double delta = 0.0;
      check(dtm_scheme_delta_coefficient(alpha, n, &delta));
      dtm_probe_summary probe{};
      check(dtm_advection_probe(alpha, n, o.tau, o.points, length, o.sigma, &probe, nullptr));
      p.table.add({alpha, static_cast<long long>(n), delta, probe.minimum, probe.peak});
    }
  }
  p.summary["length"] = length;
  p.tree = rows_tree(p);
  return p;
}

}  // namespace dtmech

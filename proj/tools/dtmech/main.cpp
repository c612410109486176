// dtmech: command-line front end for the dtm library.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using dtmech::Json;

// JSON config files. Nested objects name subcommands: {"quantum": {"td": {"delta-e": "7meV"}}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw CLI::ConfigError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConfigError("config: top level must be an object");
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const Json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const Json& v = it.value();
      if (v.is_object()) {
        auto p = parents;
        p.push_back(it.key());
        flatten(v, p, out);
        continue;
      }
      if (v.is_null()) continue;
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (v.is_array()) {
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(v));
      }
      out.push_back(std::move(item));
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

int report_error(const std::string& name, const std::string& message, int code) {
  std::cerr << "error=" << name << " message=\"" << escape(message) << "\"\n";
  return code;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Effective option values of one (sub)command, for the metadata echo.
Json echo_options(const CLI::App* app) {
  Json out = Json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name.empty()) continue;
    const auto& res = opt->results();
    if (!res.empty()) {
      if (res.size() == 1)
        out[name] = res.front();
      else
        out[name] = res;
    } else if (!opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

void add_quadrature_flags(CLI::App* sub, dtmech::QuadratureFlags& q) {
  sub->add_option("--nodes", q.nodes, "Gauss-Laguerre node count (0 = automatic)")->check(CLI::NonNegativeNumber);
  sub->add_option("--rel-tol", q.rel_tol, "Relative error target")->check(CLI::PositiveNumber);
  sub->add_option("--abs-tol", q.abs_tol, "Absolute error floor")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dtmech;

  CLI::App app{"Discrete-time mechanics toolkit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (flags override it)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", std::string(dtm_version()));

  GlobalOptions g;
  app.add_option("--preset", g.preset, "Physical constants")->check(CLI::IsMember({"natural", "si-planck"}));
  app.add_option("--seed", g.seed, "Random seed (Monte Carlo)");
  app.add_option("--threads", g.threads, "Worker threads (0 = DTMECH_THREADS or all cores)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", g.output, "Output file (stdout if absent)");

  TransformOptions to;
  auto* transform = app.add_subcommand("transform", "Gamma transform of a signal over a range of steps");
  transform->add_option("--signal", to.signal, "const[:c], poly:k, cos[:w], exp:b, cexp[:w] or table:file.csv")
      ->required();
  transform->add_option("--n", to.n, "Step n, or range a:b[:step]");
  transform->add_option("--tau", to.tau, "Time step (preset value if absent)");
  transform->add_option("--method", to.method, "Evaluation method")
      ->check(CLI::IsMember({"quadrature", "monte-carlo"}));
  auto* samples = transform->add_option("--samples", to.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  transform->add_option("--table-order", to.table_order, "Interpolation order for tables (1 or 3)")
      ->check(CLI::IsMember({1, 3}));
  add_quadrature_flags(transform, to.quad);
  transform->get_option("--nodes")->excludes(samples);

  ClassicalOptions co;
  auto* classical = app.add_subcommand("classical", "Moments of free particle or oscillator ensembles");
  classical->add_option("--model", co.model, "free or sho")->check(CLI::IsMember({"free", "sho"}));
  classical->add_option("--method", co.method, "closed-form or quadrature")
      ->check(CLI::IsMember({"closed-form", "quadrature"}));
  classical->add_option("--x", co.x, "Initial positions, comma separated")->required();
  classical->add_option("--p", co.p, "Initial momenta, comma separated")->required();
  classical->add_option("--masses", co.masses, "Masses, comma separated (default 1)");
  classical->add_option("--omega", co.omega, "Oscillator frequency")->check(CLI::PositiveNumber);
  classical->add_option("--tau", co.tau, "Time step (preset value if absent)");
  classical->add_option("--steps", co.steps, "Largest n")->check(CLI::NonNegativeNumber);
  add_quadrature_flags(classical, co.quad);

  auto* quantum = app.add_subcommand("quantum", "Density matrix evolution and decoherence");
  quantum->require_subcommand(1, 1);
  QuantumOptions qo;
  auto* q_evolve = quantum->add_subcommand("evolve", "Evolve a density matrix by n steps");
  auto* q_td = quantum->add_subcommand("td", "Decoherence times");
  auto* q_eq = quantum->add_subcommand("equivalence", "Closed form versus gamma transform");
  auto* q_defect = quantum->add_subcommand("defect", "Distance from unitary evolution");
  for (auto* sub : {q_evolve, q_eq}) {
    sub->add_option("--input", qo.input, "Density matrix JSON (energies, re, im)")->required();
    sub->add_option("--n", qo.n, sub == q_evolve ? "Step n" : "Step n, or range a:b[:step]");
    sub->add_flag("--project", qo.project, "Replace an invalid input by the nearest valid state");
  }
  add_quadrature_flags(q_eq, qo.quad);
  for (auto* sub : {q_td, q_defect}) {
    sub->add_option("--delta-e", qo.delta_e, "Energy gaps (meV, eV or J with --preset si-planck)")->required();
    sub->add_option("--scale", qo.scale, "Multiply every gap (e.g. particle number)")->check(CLI::PositiveNumber);
  }
  q_defect->add_option("--n", qo.n, "Step n, or range a:b[:step]");

  ChaosOptions ch;
  auto* chaos = app.add_subcommand("chaos", "Sensitivity to initial conditions, continuous vs discrete time");
  chaos->add_option("--mode", ch.mode, "ct or dt")->check(CLI::IsMember({"ct", "dt"}));
  chaos->add_option("--a", ch.a, "Initial condition, -1 < a < 1");
  chaos->add_option("--c", ch.c, "Growth rate")->check(CLI::PositiveNumber);
  auto* ch_tau = chaos->add_option("--tau", ch.tau, "Time step (dt)")->check(CLI::PositiveNumber);
  auto* ch_tmax = chaos->add_option("--t-max", ch.t_max, "Time span (ct)")->check(CLI::PositiveNumber);
  auto* ch_nmax = chaos->add_option("--n-max", ch.n_max, "Largest n (dt)")->check(CLI::PositiveNumber);
  auto* ch_samples = chaos->add_option("--samples", ch.samples, "Sample count (ct)");
  chaos->add_option("--max-residual", ch.max_residual, "Largest accepted fit residual");
  ch_tmax->excludes(ch_nmax)->excludes(ch_tau);
  ch_samples->excludes(ch_nmax)->excludes(ch_tau);

  AlphaScanOptions as;
  auto* scan = app.add_subcommand("alpha-scan", "Delta coefficient and advection probe over alpha");
  scan->add_option("--alphas", as.alphas, "a:b:step or comma list, each in [0, 1)");
  scan->add_option("--n", as.n, "Step n, or range a:b[:step]");
  scan->add_option("--tau", as.tau, "Time step")->check(CLI::PositiveNumber);
  scan->add_option("--sigma", as.sigma, "Width of the initial Gaussian")->check(CLI::PositiveNumber);
  scan->add_option("--points", as.points, "Grid points")->check(CLI::PositiveNumber);
  scan->add_option("--length", as.length, "Periodic domain length (0 = automatic)")->check(CLI::NonNegativeNumber);

  for (auto* sub : {transform, classical, quantum, chaos, scan, q_evolve, q_td, q_eq, q_defect}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    return report_error("InvalidArgument", e.what(), 2);
  }

  if (g.threads > 0) dtm_set_thread_count(g.threads);

  std::string command;
  Json config = echo_options(&app);
  try {
    Payload payload;
    const CLI::App* leaf = nullptr;
    if (transform->parsed()) {
      leaf = transform;
      payload = run_transform(g, to);
    } else if (classical->parsed()) {
      leaf = classical;
      payload = run_classical(g, co);
    } else if (q_evolve->parsed()) {
      leaf = q_evolve;
      payload = run_quantum_evolve(g, qo);
    } else if (q_td->parsed()) {
      leaf = q_td;
      payload = run_quantum_td(g, qo);
    } else if (q_eq->parsed()) {
      leaf = q_eq;
      payload = run_quantum_equivalence(g, qo);
    } else if (q_defect->parsed()) {
      leaf = q_defect;
      payload = run_quantum_defect(g, qo);
    } else if (chaos->parsed()) {
      leaf = chaos;
      payload = run_chaos(g, ch);
    } else {
      leaf = scan;
      payload = run_alpha_scan(g, as);
    }
    command = leaf->get_name();
    if (leaf->get_parent() != &app) command = leaf->get_parent()->get_name() + " " + command;
    config[command] = echo_options(leaf);

    Json meta = Json::object();
    meta["tool"] = "dtmech";
    meta["version"] = dtm_version();
    meta["command"] = command;
    meta["seed"] = g.seed;
    meta["preset"] = g.preset;
    meta["threads"] = dtm_get_thread_count();
    meta["created_utc"] = utc_now();
    meta["config"] = config;

    if (g.format == "json") {
      Json doc = Json::object();
      doc["meta"] = meta;
      doc["data"] = payload.tree;
      const std::string text = doc.dump(2) + "\n";
      if (g.output.empty())
        std::cout << text;
      else
        write_atomically(g.output, text);
    } else {
      const std::string csv = to_csv(payload.table);
      if (g.output.empty()) {
        std::cout << csv;
      } else {
        meta["summary"] = payload.summary;
        write_atomically(g.output, csv);
        write_atomically(g.output + ".meta.json", meta.dump(2) + "\n");
      }
    }
  } catch (const ApiError& e) {
    const int code = (dtm_status_is_numerical(e.status) || e.status == DTM_ERR_INTERNAL) ? 3 : 2;
    return report_error(dtm_status_name(e.status), e.what(), code);
  } catch (const UsageError& e) {
    return report_error("InvalidArgument", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("OutputError", e.what(), 2);
  }
  return 0;
}

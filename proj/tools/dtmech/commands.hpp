#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtm/dtm.h"
#include "report.hpp"
#include "units.hpp"

namespace dtmech {

// A failed library call. Numerical statuses map to exit 3.
struct ApiError : std::runtime_error {
  dtm_status status;
  ApiError(dtm_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(dtm_status status);

struct GlobalOptions {
  std::string preset = "natural";
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string format = "csv";
  std::string output;

  Preset preset_kind() const { return preset == "si-planck" ? Preset::si_planck : Preset::natural; }
  dtm_constants constants() const;
};

struct QuadratureFlags {
  int nodes = 0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;

  dtm_quadrature_options to_options() const;
};

struct TransformOptions {
  std::string signal;
  std::string n = "1";
  std::string tau;
  std::string method = "quadrature";
  std::size_t samples = 100000;
  int table_order = 3;
  QuadratureFlags quad;
};

struct ClassicalOptions {
  std::string model = "free";
  std::string method = "closed-form";
  std::string x;
  std::string p;
  std::string masses;
  double omega = 1.0;
  std::string tau;
  int steps = 10;
  QuadratureFlags quad;
};

struct QuantumOptions {
  std::string input;
  std::string n = "1";
  std::vector<std::string> delta_e;
  double scale = 1.0;
  bool project = false;
  QuadratureFlags quad;
};

struct ChaosOptions {
  std::string mode = "dt";
  double a = 0.5;
  double c = 1.0;
  double tau = 0.1;
  double t_max = 20.0;
  int n_max = 200;
  int samples = 4001;
  double max_residual = 3.0;
};

struct AlphaScanOptions {
  std::string alphas = "0:0.9:0.1";
  std::string n = "1:10";
  double tau = 1.0;
  double sigma = 0.1;
  std::size_t points = 8192;
  double length = 0.0;  // 0 picks n_max tau + 40 sigma
};

// "5", "1:10" or "1:100:10" (inclusive).
std::vector<int> parse_steps(const std::string& text);
std::vector<double> parse_list(const std::string& text, const char* what);

Payload run_transform(const GlobalOptions& g, const TransformOptions& o);
Payload run_classical(const GlobalOptions& g, const ClassicalOptions& o);
Payload run_quantum_evolve(const GlobalOptions& g, const QuantumOptions& o);
Payload run_quantum_td(const GlobalOptions& g, const QuantumOptions& o);
Payload run_quantum_equivalence(const GlobalOptions& g, const QuantumOptions& o);
Payload run_quantum_defect(const GlobalOptions& g, const QuantumOptions& o);
Payload run_chaos(const GlobalOptions& g, const ChaosOptions& o);
Payload run_alpha_scan(const GlobalOptions& g, const AlphaScanOptions& o);

}  // namespace dtmech

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "run_cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Second line, second column of a CSV payload.
std::string first_value(const std::string& csv) {
  const auto l1 = csv.find('\n');
  const auto row = csv.substr(l1 + 1, csv.find('\n', l1 + 1) - l1 - 1);
  const auto c1 = row.find(',');
  return row.substr(c1 + 1, row.find(',', c1 + 1) - c1 - 1);
}

}  // namespace

TEST_CASE("cosine transform payload") {
  const auto r = run_cli("transform --signal cos --n 1 --tau 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n,value,", 0) == 0);
  CHECK(std::stod(first_value(r.out)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("decoherence time flags") {
  const auto r = run_cli("quantum td --delta-e 7meV --preset si-planck --format json");
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  const auto& row = doc["data"]["rows"][0];
  CHECK(row["exceeds_1e10_years"] == true);
  CHECK(row["decoherence_time_years"].get<double>() == doctest::Approx(1.0e10).epsilon(0.05));
  CHECK(doc["meta"]["seed"].is_number());

  const auto hot = run_cli("quantum td --delta-e 7meV --scale 1e20 --preset si-planck --format json");
  REQUIRE(hot.code == 0);
  CHECK(json::parse(hot.out)["data"]["rows"][0]["within_1e-23_to_1e-22_s"] == true);
}

TEST_CASE("unknown flag leaves no file") {
  const auto dir = scratch_dir();
  fs::remove(dir / "never.csv");
  const auto r = run_cli("transform --signal cos --bogus 3 -o never.csv");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error=InvalidArgument message=\"", 0) == 0);
  CHECK_FALSE(fs::exists(dir / "never.csv"));
}

TEST_CASE("usage and numerical errors map to exit codes") {
  CHECK(run_cli("transform --signal exp:2 --n 3 --tau 1").code == 3);
  const auto div = run_cli("transform --signal exp:2 --n 3 --tau 1");
  CHECK(div.err.find("error=DivergentTransform") == 0);
  CHECK(run_cli("transform --signal wobble --n 1").code == 2);
  CHECK(run_cli("transform --signal cos --n 1 --nodes 64 --samples 10").code == 2);  // mutually exclusive
  CHECK(run_cli("quantum td --delta-e 7 --preset si-planck").code == 2);            // bare number in SI mode
  CHECK(run_cli("quantum td --delta-e 7meV").code == 2);                            // unit without SI preset
  CHECK(run_cli("quantum td --delta-e 7parsec --preset si-planck").code == 2);
  CHECK(run_cli("alpha-scan --alphas 1 --n 1").code == 2);
  const auto fit = run_cli("chaos --mode ct --max-residual 0.01");
  CHECK(fit.code == 3);
  CHECK(fit.err.find("error=FitUnstable") == 0);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("csv output with metadata sidecar") {
  const auto dir = scratch_dir();
  const auto r = run_cli("--seed 5 transform --signal poly:2 --n 1:4 --tau 0.5 -o poly.csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string csv = slurp(dir / "poly.csv");
  CHECK(csv.rfind("n,value,value_im,error_estimate,path,nodes\r\n", 0) == 0);
  const auto meta = json::parse(slurp(dir / "poly.csv.meta.json"));
  CHECK(meta["seed"] == 5);
  CHECK(meta["command"] == "transform");
  CHECK(meta["config"]["transform"]["signal"] == "poly:2");
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch_dir();
  write_file(dir / "cfg.json", R"({"seed": 9, "transform": {"signal": "poly:1", "n": "2", "tau": 0.25}})");
  const auto base = run_cli("--config cfg.json --format json transform");
  REQUIRE(base.code == 0);
  const auto a = json::parse(base.out);
  CHECK(a["meta"]["seed"] == 9);
  CHECK(a["data"]["rows"][0]["value"].get<double>() == doctest::Approx(0.5));
  const auto over = run_cli("--config cfg.json --format json transform --tau 1");
  REQUIRE(over.code == 0);
  CHECK(json::parse(over.out)["data"]["rows"][0]["value"].get<double>() == doctest::Approx(2.0));

  write_file(dir / "bad.json", R"({"transform": {"signal": "cos", "colour": "red"}})");
  CHECK(run_cli("--config bad.json transform").code == 2);
}

TEST_CASE("density matrix round trip") {
  const auto dir = scratch_dir();
  write_file(dir / "rho.json",
             R"({"energies": [0, 1.5, 4], "re": [[0.5, 0.1, 0.05], [0.1, 0.3, 0.02], [0.05, 0.02, 0.2]],
                 "im": [[0, 0.1, 0], [-0.1, 0, 0.03], [0, -0.03, 0]]})");
  REQUIRE(run_cli("--format json -o evolved.json quantum evolve --input rho.json --n 7").code == 0);
  const auto first = json::parse(slurp(dir / "evolved.json"))["data"];
  REQUIRE(run_cli("--format json -o again.json quantum evolve --input evolved.json --n 0").code == 0);
  const auto second = json::parse(slurp(dir / "again.json"))["data"];
  CHECK(first["re"] == second["re"]);
  CHECK(first["im"] == second["im"]);
  CHECK(first["energies"] == second["energies"]);

  write_file(dir / "si.json", R"({"energies": [0, 7], "energy_unit": "meV", "re": [[0.5, 0.5], [0.5, 0.5]]})");
  CHECK(run_cli("--preset si-planck quantum evolve --input si.json --n 3").code == 0);
  CHECK(run_cli("quantum evolve --input si.json --n 3").code == 2);

  write_file(dir / "neg.json", R"({"energies": [0, 1], "re": [[1.2, 0], [0, -0.2]]})");
  CHECK(run_cli("quantum evolve --input neg.json --n 1").code == 2);
  const auto proj = run_cli("quantum evolve --input neg.json --n 1 --project");
  CHECK(proj.code == 0);
  CHECK(proj.err.find("warning=Projected") == 0);
}

TEST_CASE("other subcommands produce their columns") {
  auto header = [](const std::string& csv) { return csv.substr(0, csv.find('\r')); };
  const auto c = run_cli("classical --model free --x 0,0 --p 1,2 --tau 1 --steps 3");
  REQUIRE(c.code == 0);
  CHECK(header(c.out) == "n,i,j,moment_name,value");
  CHECK(c.out.find("3,0,1,cov_xx,6\r\n") != std::string::npos);

  const auto ch = run_cli("chaos --mode ct --t-max 20");
  REQUIRE(ch.code == 0);
  CHECK(header(ch.out) == "n_or_t,distance,log_distance,fitted_line");

  const auto s = run_cli("alpha-scan --alphas 0,0.5 --n 1:2 --sigma 0.05");
  REQUIRE(s.code == 0);
  CHECK(header(s.out) == "alpha,n,delta_coeff,grid_min,grid_peak");
  CHECK(s.out.find("0.5,1,-1,-") != std::string::npos);

  const auto d = run_cli("quantum defect --delta-e 1 --n 2");
  REQUIRE(d.code == 0);
  CHECK(d.out.find("2,1,0.69314718055994") != std::string::npos);

  const auto mc = run_cli("--seed 3 transform --signal cexp:1 --n 1:3 --method monte-carlo --samples 1000");
  REQUIRE(mc.code == 0);
  CHECK(header(mc.out) == "n,value,value_im,standard_error,samples");
}

TEST_CASE("payloads repeat across runs and thread counts") {
  const std::string args = "--seed 17 transform --signal exp:-0.2 --n 1:12 --method monte-carlo --samples 4000";
  const auto a = run_cli(args, "DTMECH_THREADS=1");
  const auto b = run_cli(args, "DTMECH_THREADS=4");
  const auto c = run_cli(args + " --threads 3");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const auto other = run_cli("--seed 18 transform --signal exp:-0.2 --n 1:12 --method monte-carlo --samples 4000");
  CHECK(other.out != a.out);
}

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <doctest.h>

#include "redmap/cli_reports.hpp"
#include "redmap/errors.hpp"
#include "redmap/report_io.hpp"
#include "support.hpp"

using namespace redmap;
namespace fs = std::filesystem;
using testing::kPi;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("redmap_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

int run_in(const cli::RunConfig& base, const fs::path& dir, std::string* out = nullptr, std::string* err = nullptr) {
  cli::RunConfig cfg = base;
  cfg.out_dir = dir.string();
  std::ostringstream o, e;
  const int code = cli::run(cfg, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(REDMAP_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse_config accepts a sweep grid") {
  const cli::RunConfig c = cli::parse_config(R"({"scenario":"sqrtcnot","theta_grid":[0,1.5,64],"seed":7})");
  REQUIRE(c.scenario_id.has_value());
  CHECK(*c.scenario_id == "sqrtcnot");
  CHECK(c.thetas.size() == 64);
  CHECK(c.thetas.front() == 0.0);
  CHECK(c.thetas.back() == doctest::Approx(1.5));
  CHECK(c.seed == 7);
}

TEST_CASE("parse_config rejects bad input") {
  CHECK_THROWS_AS(cli::parse_config(R"({"scenario":"bogus"})"), UnknownScenario);
  CHECK_THROWS_AS(cli::parse_config(R"({"scenario":"mc","n_samples":0})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"scenario":"mc","colour":1})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"scenario":)"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"([1,2])"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"theta":"x"})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"theta":0.1,"theta_values":[0.2]})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"seed":-1})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"ensemble":"gaussian"})"), ConfigError);
  CHECK_THROWS_AS(
      cli::parse_config(R"({"convention":{"control_slot":"first","root_branch":"principal","tensor_order":"SE"}})"),
      ConfigError);
}

TEST_CASE("parse_config reads an explicit convention") {
  const cli::RunConfig c = cli::parse_config(
      R"({"convention":{"control_slot":"second","root_branch":"alternate","tensor_order":"ES","state_reading":"SE"}})");
  REQUIRE(c.convention.has_value());
  CHECK(c.convention->gates == GateConvention(Slot::second, RootBranch::alternate, TensorOrder::ES));
  CHECK(c.convention->state_reading == TensorOrder::SE);
}

TEST_CASE("single-qubit operator names") {
  CHECK(max_abs_diff(cli::single_qubit("XROOT2"), unitary_root(pauli("x"), 2, RootBranch::principal)) < 1e-15);
  CHECK_THROWS_AS(cli::single_qubit("XROOT"), UnknownGate);
  CHECK_THROWS_AS(cli::single_qubit("H"), UnknownGate);
}

TEST_CASE("sweep CSV has one row per theta and round-trips") {
  TempDir dir("sweep");
  cli::RunConfig cfg = cli::parse_config(R"({"scenario":"sqrtcnot","theta_grid":[0.01,1.5,64]})");
  cfg.command = "sweep";
  REQUIRE(run_in(cfg, dir.path) == cli::kExitOk);
  const std::string text = slurp(dir.path / "sqrtcnot_sweep.csv");
  CHECK(text.substr(0, text.find('\n')) == io::kSweepHeader);
  const auto rows = io::parse_sweep_csv(text);
  REQUIRE(rows.size() == 64);
  CHECK(io::sweep_csv(rows) == text);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].theta == cfg.thetas[i]);
}

TEST_CASE("sweep verdict column agrees with a recomputed CP check") {
  TempDir dir("verdict");
  cli::RunConfig cfg = cli::parse_config(R"({"scenario":"cnot_twice","theta_values":[0.1,0.3,0.7853981633974483,1.0,1.3]})");
  cfg.command = "sweep";
  REQUIRE(run_in(cfg, dir.path) == cli::kExitOk);
  const auto rows = io::parse_sweep_csv(slurp(dir.path / "cnot_twice_sweep.csv"));
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    if (std::abs(r.theta - kPi / 4) < 1e-12) {
      CHECK(r.verdict == Verdict::SINGULAR);
      CHECK(std::isnan(r.lambda_minus));
      continue;
    }
    const ScenarioReport rep = scenario_cnot_twice(r.theta);
    CHECK(rep.verdict == cp_check(ChoiMatrix(rep.matrix("B2"), 2)).verdict);
    CHECK(r.verdict == rep.verdict);
    const Verdict from_column = r.lambda_minus < -kCpTol * std::max(1.0, std::abs(r.lambda_plus)) ? Verdict::NCP : Verdict::CP;
    CHECK(from_column == r.verdict);
  }
}

TEST_CASE("JSON serialization round-trips matrices, states and maps") {
  const ScenarioReport r = scenario_sqrtcphase(kPi / 4);
  const io::Json j = io::to_json(r);
  CHECK(j["verdict"] == "NCP");
  const AMatrix a(r.matrix("A"), 2);
  CHECK(max_abs_diff(io::a_from_json(io::to_json(a)).matrix(), a.matrix()) == 0.0);
  const ComplexMatrix m = r.matrix("B");
  CHECK(max_abs_diff(io::matrix_from_json(io::to_json(m)), m) == 0.0);
  const JointPureState psi = psi_theta(0.3, TensorOrder::ES);
  const JointPureState back = io::state_from_json(io::to_json(psi));
  CHECK(back.amplitudes() == psi.amplitudes());
  CHECK(back.system_slot() == psi.system_slot());
  CHECK(io::num(0.1) == "0.10000000000000001");
  CHECK(io::num(std::nan("")) == "nan");
}

TEST_CASE("reproduce-paper output is byte-identical across thread counts") {
  TempDir a("repro1"), b("repro4");
  cli::RunConfig cfg;
  cfg.command = "reproduce-paper";
  cfg.threads = 1;
  std::string out1, out4;
  REQUIRE(run_in(cfg, a.path, &out1) == cli::kExitOk);
  cfg.threads = 4;
  REQUIRE(run_in(cfg, b.path, &out4) == cli::kExitOk);
  const auto fa = snapshot(a.path), fb = snapshot(b.path);
  CHECK(fa.size() == 3);
  CHECK(fa.count("reproduce_paper.json") == 1);
  for (const auto& [name, _] : fa) CHECK(fa.at(name) == fb.at(name));
  CHECK(out1.find("PASS 1 ") != std::string::npos);
  for (const auto& [name, _] : fa) CHECK(name.find(".tmp") == std::string::npos);
}

TEST_CASE("Monte Carlo output depends on the seed only") {
  TempDir a("mc1"), b("mc3");
  cli::RunConfig cfg = cli::parse_config(R"({"scenario":"mc","n_samples":40,"seed":5,"ensemble":"haar_full"})");
  cfg.command = "mcfraction";
  cfg.threads = 1;
  REQUIRE(run_in(cfg, a.path) == cli::kExitOk);
  cfg.threads = 3;
  REQUIRE(run_in(cfg, b.path) == cli::kExitOk);
  CHECK(slurp(a.path / "mcfraction.json") == slurp(b.path / "mcfraction.json"));
}

TEST_CASE("conventions subcommand emits the fit record") {
  TempDir dir("conv");
  cli::RunConfig cfg;
  cfg.command = "conventions";
  REQUIRE(run_in(cfg, dir.path) == cli::kExitOk);
  const io::Json j = io::Json::parse(slurp(dir.path / "conventions.json"));
  CHECK(j.contains("convention"));
  CHECK(j["candidates"].size() == 16);
}

TEST_CASE("exit codes of the command-line binary") {
  TempDir dir("exit");
  const std::string out = " --out " + dir.path.string();
  CHECK(shell("dimratio" + out) == 0);
  CHECK(shell("spectrum --theta 0.5" + out) == 0);
  CHECK(shell("spectrum --theta 0.7853981633974483" + out) == 0);  // sqrtcphase is regular here

  const fs::path bad_cfg = dir.path / "cnot.json";
  std::ofstream(bad_cfg) << R"({"scenario":"cnot_twice","theta":0.7853981633974483})";
  CHECK(shell("spectrum --config " + bad_cfg.string() + out) == 2);

  const fs::path bogus = dir.path / "bogus.json";
  std::ofstream(bogus) << R"({"scenario":"bogus"})";
  CHECK(shell("--config " + bogus.string() + out) == 1);

  const fs::path zero = dir.path / "zero.json";
  std::ofstream(zero) << R"({"scenario":"mc","n_samples":0})";
  CHECK(shell("--config " + zero.string() + out) == 1);

  CHECK(shell("frobnicate" + out) == 1);
  CHECK(shell("sweep --format xml" + out) == 1);
}

TEST_CASE("singular spectrum names the maximal-entanglement singularity") {
  TempDir dir("singular");
  cli::RunConfig cfg = cli::parse_config(R"({"scenario":"cnot_twice","theta":0.7853981633974483})");
  cfg.command = "spectrum";
  std::string err;
  CHECK(run_in(cfg, dir.path, nullptr, &err) == cli::kExitScenario);
  CHECK(err.find("maximal") != std::string::npos);
  CHECK(fs::is_empty(dir.path));
}

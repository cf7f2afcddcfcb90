#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ddspce/fit.hpp"
#include "ddspce/sample_matrix.hpp"
#include "support/case5.hpp"
#include "support/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path log = fs::path(DDSPCE_TEST_TMP) / "cli_log.txt";
  const std::string cmd =
      std::string(DDSPCE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(log);
  std::stringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// One-time fixture directory with a network, samples and a config.
struct CliFixture {
  fs::path dir;
  fs::path config;

  explicit CliFixture(const std::string& name, int training_rows = 140,
                      int eval_rows = 300, double e_stop = 0.05,
                      int max_mp = 140) {
    dir = fs::path(DDSPCE_TEST_TMP) / name;
    fs::create_directories(dir);
    testsupport::write_case5(dir / "case5.json");
    ddspce::save_samples(testsupport::make_case5_samples(training_rows, 910, 0.1),
                         (dir / "train.csv").string());
    ddspce::save_samples(testsupport::make_case5_samples(eval_rows, 911, 0.1),
                         (dir / "eval.csv").string());
    config = dir / "config.json";
    std::ofstream out(config);
    out << testsupport::case5_config_json(
        (dir / "case5.json").string(), (dir / "train.csv").string(),
        (dir / "eval.csv").string(), (dir / "out").string(), e_stop, max_mp);
  }
};

}  // namespace

TEST_CASE("cli: fit writes a model and a log") {
  CliFixture fx("cli_fit");
  const RunResult r = run_cli("fit -c " + fx.config.string());
  CAPTURE(r.output);
  REQUIRE((r.exit_code == 0 || r.exit_code == 3));
  CHECK(fs::exists(fx.dir / "out" / "model.json"));
  CHECK(fs::exists(fx.dir / "out" / "fit_log.json"));
  CHECK(r.output.find("e_cloo") != std::string::npos);
}

TEST_CASE("cli: mcs outputs are deterministic across reruns") {
  CliFixture fx("cli_mcs");
  const RunResult r1 = run_cli("mcs -c " + fx.config.string());
  CAPTURE(r1.output);
  REQUIRE(r1.exit_code == 0);
  const std::string csv1 = slurp(fx.dir / "out" / "ttc_mcs.csv");
  const std::string sum1 = slurp(fx.dir / "out" / "summary_mcs.json");
  REQUIRE(!csv1.empty());

  const RunResult r2 = run_cli("mcs -c " + fx.config.string());
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(fx.dir / "out" / "ttc_mcs.csv") == csv1);
  CHECK(slurp(fx.dir / "out" / "summary_mcs.json") == sum1);
  CHECK(fs::exists(fx.dir / "out" / "histogram_mcs.csv"));
  CHECK(fs::exists(fx.dir / "out" / "cdf_mcs.csv"));
}

TEST_CASE("cli: evaluate + atc pipeline composes over files") {
  CliFixture fx("cli_pipe");
  REQUIRE(run_cli("fit -c " + fx.config.string()).exit_code <= 3);
  REQUIRE(run_cli("mcs -c " + fx.config.string()).exit_code == 0);

  const std::string model = (fx.dir / "out" / "model.json").string();
  const RunResult ev = run_cli("evaluate -c " + fx.config.string() + " -m " + model);
  CAPTURE(ev.output);
  REQUIRE(ev.exit_code == 0);
  CHECK(fs::exists(fx.dir / "out" / "summary_ddspce.json"));

  const RunResult atc = run_cli(
      "atc -c " + fx.config.string() + " -s " +
      (fx.dir / "out" / "summary_ddspce.json").string() + " -r " +
      (fx.dir / "out" / "summary_mcs.json").string());
  CAPTURE(atc.output);
  REQUIRE(atc.exit_code == 0);
  CHECK(fs::exists(fx.dir / "out" / "atc_report.json"));
  CHECK(fs::exists(fx.dir / "out" / "atc_report.txt"));
  const std::string json = slurp(fx.dir / "out" / "atc_report.json");
  CHECK(json.find("delta_mu_pct") != std::string::npos);

  // report = evaluate + atc in one step, reusing the mcs reference.
  const RunResult rep = run_cli("report -c " + fx.config.string() + " -m " + model);
  REQUIRE(rep.exit_code == 0);
}

TEST_CASE("cli: config errors give exit code 1 naming the path") {
  CliFixture fx("cli_err");
  // Point the config at a network file that does not exist.
  std::string text = slurp(fx.config);
  const std::string bad = (fx.dir / "missing_net.json").string();
  const auto pos = text.find("case5.json");
  REQUIRE(pos != std::string::npos);
  // Replace the whole network path value.
  std::string cfg2 = text;
  const std::string needle = (fx.dir / "case5.json").string();
  cfg2.replace(cfg2.find(needle), needle.size(), bad);
  std::ofstream(fx.dir / "config_bad.json") << cfg2;

  const RunResult r = run_cli("fit -c " + (fx.dir / "config_bad.json").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("missing_net.json") != std::string::npos);

  const RunResult r2 = run_cli("fit -c /nonexistent/config.json");
  CHECK(r2.exit_code == 1);

  // Structurally broken config (mandatory section missing) is exit 1 too.
  std::ofstream(fx.dir / "config_broken.json")
      << R"({"network": "x", "training_samples": "y"})";
  const RunResult r3 =
      run_cli("fit -c " + (fx.dir / "config_broken.json").string());
  CHECK(r3.exit_code == 1);
  CHECK(r3.output.find("config JSON invalid") != std::string::npos);

  // Plain usage errors follow the same convention; --help stays 0.
  CHECK(run_cli("fit").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: evaluating a model of the wrong width exits 1") {
  CliFixture fx("cli_dim");
  // A surrogate trained on two synthetic inputs cannot serve the 6-column
  // case5 sample files.
  testsupport::Rng rng(930);
  ddspce::SampleMatrix pool;
  pool.column_names = {"a", "b"};
  pool.values.resize(60, 2);
  for (int i = 0; i < 60; ++i) pool.values.row(i) << rng.normal(), rng.normal();
  ddspce::FitConfig cfg;
  cfg.degree = 1;
  cfg.q_norm = 1.0;
  cfg.e_stop = 1e-6;
  cfg.initial_mp = 30;
  const ddspce::FitResult fit = ddspce::fit_sparse_pce(
      [](const Eigen::VectorXd& u) { return u[0] + u[1]; }, pool, {}, cfg, 1);
  const std::string model = (fx.dir / "narrow_model.json").string();
  fit.model.save(model);

  const RunResult r = run_cli("evaluate -c " + fx.config.string() + " -m " + model);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("model expects") != std::string::npos);
}

TEST_CASE("cli: unreachable e_stop exits 3 but still writes the model") {
  CliFixture fx("cli_budget", 60, 60, 1e-12, 40);
  const RunResult r = run_cli("fit -c " + fx.config.string());
  CAPTURE(r.output);
  CHECK(r.exit_code == 3);
  CHECK(fs::exists(fx.dir / "out" / "model.json"));
  CHECK(r.output.find("budget") != std::string::npos);
}

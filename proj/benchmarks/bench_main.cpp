#include <benchmark/benchmark.h>

#include "ddspce/design.hpp"
#include "ddspce/fit.hpp"
#include "ddspce/network.hpp"
#include "ddspce/power_flow.hpp"
#include "ddspce/transfer.hpp"
#include "support/synth.hpp"

using namespace ddspce;

namespace {

std::string data_path(const std::string& name) {
  return std::string(DDSPCE_DATA_DIR) + "/" + name;
}

void bm_power_flow_case9(benchmark::State& state) {
  const Network net = load_network(data_path("case9.json"));
  for (auto _ : state) {
    const PowerFlowSolution sol = solve_power_flow(net);
    benchmark::DoNotOptimize(sol.v_mag.sum());
  }
}
BENCHMARK(bm_power_flow_case9);

void bm_ttc_case5_sample(benchmark::State& state) {
  const Network net = load_network(data_path("case5.json"));
  Transaction t;
  t.sources = {{2, 1.0}};
  t.sinks = {{4, 0.6}, {5, 0.4}};
  t.sink_power_factor = 0.95;
  TtcEvaluator ev;
  ev.base = net;
  const SampleMatrix samples = testsupport::make_case5_samples(64, 5, 0.1);
  ev.mapping = resolve_mapping(net, samples.column_names);
  ev.direction = build_direction(t);
  ev.limits = LimitSet::from_network(net);
  ev.contingencies = {{"L2-4 out", {"L2-4"}}};
  int i = 0;
  for (auto _ : state) {
    const Eigen::VectorXd row = samples.values.row(i++ % samples.rows());
    benchmark::DoNotOptimize(ev(row));
  }
}
BENCHMARK(bm_ttc_case5_sample);

void bm_basis_build(benchmark::State& state) {
  testsupport::Rng rng(7);
  Eigen::VectorXd col(600);
  for (int i = 0; i < 600; ++i) col[i] = rng.weibull(2.0, 9.0);
  for (auto _ : state) {
    const UnivariateBasis b = build_univariate_basis(col, 3);
    benchmark::DoNotOptimize(b.norms.back());
  }
}
BENCHMARK(bm_basis_build);

void bm_surrogate_eval_10k(benchmark::State& state) {
  const SampleMatrix pool = testsupport::make_case5_samples(300, 9, 0.1);
  const ModelEvaluator f = [](const Eigen::VectorXd& u) {
    return u[0] + 0.5 * u[1] - 0.2 * u[3] + 20.0 * u[5];
  };
  FitConfig cfg;
  cfg.degree = 2;
  cfg.q_norm = 1.0;
  cfg.e_stop = 1e-6;
  cfg.initial_mp = 60;
  cfg.max_mp = 300;
  const FitResult fit = fit_sparse_pce(f, pool, {}, cfg, 1);
  const SampleMatrix big = testsupport::make_case5_samples(10000, 10, 0.1);
  for (auto _ : state) {
    const Eigen::VectorXd out = fit.model.evaluate(big);
    benchmark::DoNotOptimize(out.sum());
  }
}
BENCHMARK(bm_surrogate_eval_10k);

}  // namespace

BENCHMARK_MAIN();

#include <doctest.h>

#include <cmath>

#include "ddspce/errors.hpp"
#include "ddspce/fit.hpp"
#include "support/synth.hpp"

using namespace ddspce;

namespace {

SampleMatrix correlated_pool(int rows, unsigned seed) {
  testsupport::Rng rng(seed);
  SampleMatrix pool;
  pool.column_names = {"u1", "u2", "u3"};
  pool.values.resize(rows, 3);
  for (int i = 0; i < rows; ++i) {
    const double f = rng.normal();
    pool.values.row(i) << 10.0 + 2.0 * f + rng.normal(),
        -5.0 + 0.5 * f + 0.2 * rng.normal(), rng.weibull(2.0, 9.0);
  }
  return pool;
}

}  // namespace

TEST_CASE("fit_sparse_pce reproduces an exactly representable response") {
  const SampleMatrix pool = correlated_pool(400, 61);
  const ModelEvaluator f = [](const Eigen::VectorXd& u) {
    return 2.0 + 0.8 * u[0] - 0.05 * u[1] * u[1] + 0.01 * u[0] * u[2];
  };
  FitConfig cfg;
  cfg.degree = 2;
  cfg.q_norm = 1.0;
  cfg.e_stop = 1e-8;
  cfg.initial_mp = 40;
  cfg.max_mp = 400;

  const FitResult res = fit_sparse_pce(f, pool, {}, cfg, 1);
  CHECK(res.converged);
  CHECK(res.rounds.size() == 1);  // first round already exact
  CHECK(res.model.e_cloo < 1e-8);
  CHECK(res.evaluator_calls == 40);

  // Held-out rows reproduce the response.
  const SampleMatrix held = correlated_pool(200, 62);
  const Eigen::VectorXd pred = res.model.evaluate(held);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd row = held.values.row(i);
    worst = std::max(worst, std::abs(pred[i] - f(row)));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("fit_sparse_pce exhausts the budget on a rough response") {
  const SampleMatrix pool = correlated_pool(150, 63);
  const ModelEvaluator f = [](const Eigen::VectorXd& u) {
    return std::sin(3.0 * u[0]) * std::cos(2.0 * u[2]) + std::tanh(u[1]);
  };
  FitConfig cfg;
  cfg.degree = 2;
  cfg.q_norm = 1.0;
  cfg.e_stop = 1e-10;  // unreachable for this response
  cfg.initial_mp = 20;
  cfg.delta_mp = 10;
  cfg.max_mp = 60;

  const FitResult res = fit_sparse_pce(f, pool, {}, cfg, 1);
  CHECK_FALSE(res.converged);
  CHECK(res.evaluator_calls == 60);
  CHECK(res.rounds.size() == 5);  // 20, 30, 40, 50, 60
  CHECK(res.model.training_size >= 20);
  CHECK(res.model.e_cloo >= 1e-10);
  // Best-so-far model is the smallest error across the rounds.
  double best = 1e300;
  for (const auto& r : res.rounds) best = std::min(best, r.e_cloo);
  CHECK(res.model.e_cloo == best);
}

TEST_CASE("fit_sparse_pce reuses known responses and is deterministic") {
  const SampleMatrix pool = correlated_pool(120, 64);
  int calls = 0;
  const ModelEvaluator f = [&calls](const Eigen::VectorXd& u) {
    ++calls;
    return 1.0 + u[0] + 0.2 * u[1];
  };
  FitConfig cfg;
  cfg.degree = 2;
  cfg.q_norm = 1.0;
  cfg.e_stop = 1e-8;
  cfg.initial_mp = 30;
  cfg.max_mp = 120;

  std::vector<double> known;
  for (int i = 0; i < 30; ++i) {
    const Eigen::VectorXd row = pool.values.row(i);
    known.push_back(1.0 + row[0] + 0.2 * row[1]);
  }
  const FitResult res = fit_sparse_pce(f, pool, known, cfg, 1);
  CHECK(res.converged);
  CHECK(calls == 0);  // everything served from known responses
  CHECK(res.evaluator_calls == 0);

  const FitResult res2 = fit_sparse_pce(f, pool, known, cfg, 1);
  CHECK(res.model.to_json_string() == res2.model.to_json_string());
}

TEST_CASE("fit_sparse_pce caps the degree of low-support coordinates") {
  // Third input is binary; after PCA it may stay (nearly) two-valued, so
  // the fit must not demand a quadratic basis from it.
  testsupport::Rng rng(65);
  SampleMatrix pool;
  pool.column_names = {"u1", "u2", "flag"};
  pool.values.resize(200, 3);
  for (int i = 0; i < 200; ++i)
    pool.values.row(i) << rng.normal(), 5.0 + rng.uniform(),
        rng.bernoulli01(0.5);

  const ModelEvaluator f = [](const Eigen::VectorXd& u) {
    return u[0] + 3.0 * u[2];
  };
  FitConfig cfg;
  cfg.degree = 2;
  cfg.q_norm = 1.0;
  cfg.e_stop = 1e-6;
  cfg.initial_mp = 60;
  cfg.max_mp = 200;
  const FitResult res = fit_sparse_pce(f, pool, {}, cfg, 1);
  CHECK(res.converged);
}

TEST_CASE("fit_sparse_pce validates sizes") {
  const SampleMatrix pool = correlated_pool(10, 66);
  const ModelEvaluator f = [](const Eigen::VectorXd&) { return 0.0; };
  FitConfig cfg;
  std::vector<double> too_many(11, 0.0);
  CHECK_THROWS_AS(fit_sparse_pce(f, pool, too_many, cfg, 1),
                  DimensionMismatchError);
}

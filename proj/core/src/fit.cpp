#include "ddspce/fit.hpp"

#include <algorithm>

#include "ddspce/design.hpp"
#include "ddspce/errors.hpp"
#include "ddspce/lar.hpp"
#include "ddspce/parallel.hpp"

namespace ddspce {

namespace {

struct RoundFit {
  PceModel model;
  FitRound log;
};

RoundFit fit_one_round(const SampleMatrix& pool, const std::vector<double>& y,
                       int mp, const FitConfig& cfg) {
  SampleMatrix train;
  train.values = pool.values.topRows(mp);
  train.column_names = pool.column_names;
  const Eigen::VectorXd yv =
      Eigen::Map<const Eigen::VectorXd>(y.data(), mp);

  PceModel model;
  model.config = cfg;
  model.training_size = mp;
  model.input_columns = pool.column_names;
  model.pca = fit_pca(train);
  const SampleMatrix zeta = apply_pca(model.pca, train);

  const int n = static_cast<int>(pool.cols());
  model.bases.reserve(static_cast<size_t>(n));
  std::vector<int> caps(static_cast<size_t>(n), cfg.degree);
  for (int i = 0; i < n; ++i) {
    // A coordinate with few distinct values cannot carry the full degree;
    // cap it at support-1 rather than failing the whole fit.
    const Eigen::VectorXd col = zeta.values.col(i);
    RawMoments probe = estimate_raw_moments(col, 0);
    const int cap = std::min(cfg.degree, std::max(0, probe.support_count - 1));
    caps[static_cast<size_t>(i)] = cap;
    model.bases.push_back(build_univariate_basis(col, cap));
  }

  const IndexSet candidates =
      generate_index_set(n, cfg.degree, cfg.q_norm, caps);
  const Eigen::MatrixXd psi =
      assemble_design_matrix(model.bases, candidates, zeta);
  const LarSelection sel = lar_select(psi, yv);

  model.active_indices.reserve(sel.active.size());
  for (int col : sel.active)
    model.active_indices.push_back(candidates.indices[static_cast<size_t>(col)]);
  model.coefficients = sel.coeffs;
  model.e_cloo = sel.e_cloo;

  RoundFit r{std::move(model),
             {mp, sel.e_cloo, static_cast<int>(sel.active.size()),
              static_cast<int>(candidates.size())}};
  return r;
}

}  // namespace

FitResult fit_sparse_pce(const ModelEvaluator& evaluator,
                         const SampleMatrix& pool,
                         const std::vector<double>& known_responses,
                         const FitConfig& cfg, int workers) {
  pool.validate();
  cfg.validate();
  const int n = static_cast<int>(pool.cols());
  const int pool_rows = static_cast<int>(pool.rows());

  int budget = cfg.max_mp > 0 ? std::min(cfg.max_mp, pool_rows) : pool_rows;
  int mp = cfg.initial_mp > 0 ? cfg.initial_mp : 5 * n;
  mp = std::min(mp, budget);
  const int delta = cfg.delta_mp > 0 ? cfg.delta_mp : n;
  if (mp < 2)
    throw InsufficientSamplesError("training pool too small to start a fit");

  std::vector<double> responses(known_responses.begin(), known_responses.end());
  if (static_cast<int>(responses.size()) > pool_rows)
    throw DimensionMismatchError("more known responses than pool rows");
  FitResult result;

  auto extend_responses = [&](int target) {
    const int have = static_cast<int>(responses.size());
    if (have >= target) return;
    const auto chunk = parallel_map(
        static_cast<std::size_t>(target - have), workers,
        [&](std::size_t i) {
          const Eigen::VectorXd row =
              pool.values.row(have + static_cast<Eigen::Index>(i));
          return evaluator(row);
        });
    responses.insert(responses.end(), chunk.begin(), chunk.end());
    result.evaluator_calls += target - have;
  };

  bool have_best = false;
  for (;;) {
    extend_responses(mp);
    RoundFit round = fit_one_round(pool, responses, mp, cfg);
    result.rounds.push_back(round.log);
    if (!have_best || round.model.e_cloo < result.model.e_cloo) {
      result.model = std::move(round.model);
      have_best = true;
    }
    if (result.rounds.back().e_cloo < cfg.e_stop) {
      result.converged = true;
      break;
    }
    if (mp >= budget) break;  // budget exhausted, best model stands
    mp = std::min(mp + delta, budget);
  }
  return result;
}

}  // namespace ddspce

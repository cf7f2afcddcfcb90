#pragma once

#include <functional>
#include <vector>

#include "ddspce/pce_model.hpp"
#include "ddspce/sample_matrix.hpp"

namespace ddspce {

/// Black-box response model: one physical input row -> scalar response.
/// Must be deterministic and side-effect free; calls may be dispatched
/// concurrently.
using ModelEvaluator = std::function<double(const Eigen::VectorXd&)>;

struct FitRound {
  int training_size = 0;
  double e_cloo = 0.0;
  int active_terms = 0;
  int candidate_terms = 0;
};

struct FitResult {
  PceModel model;               // best model seen (by e_cloo)
  std::vector<FitRound> rounds;
  int evaluator_calls = 0;
  bool converged = false;       // e_cloo < e_stop reached
};

/// Adaptive sparse fit: starting from the first rows of the sample pool,
/// iterate PCA refit, per-coordinate basis construction, hyperbolic
/// index truncation and LAR selection, enlarging the training set by
/// delta_mp evaluator calls per round until e_cloo < e_stop or the
/// budget (max_mp, capped by the pool size) is exhausted. `known_responses`
/// may carry responses for a prefix of the pool to avoid re-evaluation.
FitResult fit_sparse_pce(const ModelEvaluator& evaluator,
                         const SampleMatrix& pool,
                         const std::vector<double>& known_responses,
                         const FitConfig& cfg, int workers = 0);

}  // namespace ddspce

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddspce/network.hpp"
#include "ddspce/power_flow.hpp"

namespace ddspce {

/// Load-generation variation per unit of the transfer parameter lambda.
/// Normalized so that the sink active increments sum to 1 MW, making
/// lambda the total transferred power in MW.
struct TransferDirection {
  struct Entry {
    int bus = 0;
    double mw_per_lambda = 0.0;
  };
  std::vector<Entry> delta_pg;  // source active generation
  std::vector<Entry> delta_pl;  // sink active load
  std::vector<Entry> delta_ql;  // sink reactive load (MVar per lambda)
};

/// A transaction: source and sink buses with their shares plus the sink
/// power factor used for the reactive load increments.
struct Transaction {
  struct Share {
    int bus = 0;
    double share = 0.0;
  };
  std::vector<Share> sources;
  std::vector<Share> sinks;
  double sink_power_factor = 1.0;
};

/// Normalized direction for a transaction; throws EmptySideError when a
/// side is empty or has non-positive total share.
TransferDirection build_direction(const Transaction& t);

/// Operating limits, defaulting to the values carried by the network.
struct LimitSet {
  Eigen::VectorXd v_min;  // per bus, network order
  Eigen::VectorXd v_max;
  std::vector<double> s_max_mva;   // per branch, 0 = unlimited
  std::vector<double> p_min_mw;    // per generator
  std::vector<double> p_max_mw;
  std::vector<double> q_min_mvar;
  std::vector<double> q_max_mvar;

  static LimitSet from_network(const Network& net);

  /// Copy with voltage bands widened by v_margin (pu) and thermal limits
  /// scaled, for contingency-specific relaxations.
  LimitSet relaxed(double v_margin, double thermal_scale) const;
};

struct Violation {
  enum class Type { Voltage, Thermal, GenP, GenQ };
  Type type = Type::Voltage;
  std::string location;
  double magnitude = 0.0;  // relative excess beyond the limit
};

const char* violation_tag(Violation::Type t);

/// All limit violations of a converged solution, in bus/branch/generator
/// order; an empty list means the operating point is feasible.
std::vector<Violation> check_limits(const Network& net,
                                    const PowerFlowSolution& sol,
                                    const LimitSet& limits);

struct ContingencyCase {
  std::string label;
  std::vector<std::string> branch_ids;  // outaged together (N-1, N-2, ...)
};

struct TtcOptions {
  double lambda_tol_mw = 0.1;    // bisection bracket width
  double lambda_step_mw = 10.0;  // initial bracketing step (doubles)
  double lambda_cap_mw = 1e6;    // search guard; reaching it throws
  bool island_skip = false;      // skip islanded cases instead of lambda = 0
  double contingency_v_margin = 0.0;      // voltage-band relaxation, pu
  double contingency_thermal_scale = 1.0; // thermal relaxation factor
  PowerFlowOptions pf;
};

/// Largest transfer and the tag of the limit binding just beyond it.
/// Tags use the fixed vocabulary {voltage, thermal, gen-P, gen-Q,
/// diverged, islanded}.
struct TransferResult {
  double lambda_mw = 0.0;
  std::string binding;
};

/// Maximum feasible transfer along `dir` by stepping then bisection with
/// warm-started power flows. An infeasible or diverged base case maps to
/// lambda = 0 carrying its violation tag.
TransferResult max_transfer(const Network& net, const TransferDirection& dir,
                            const LimitSet& limits, const TtcOptions& opt = {});

struct TtcCaseResult {
  std::string label;
  double lambda_mw = 0.0;
  std::string binding;
};

struct TtcOutcome {
  std::vector<TtcCaseResult> per_case;  // index 0 = base case
  double lambda_ttc = 0.0;
  int binding_case = 0;
};

/// Transfer capability across the base case and every contingency;
/// lambda_ttc is the minimum. Islanded cases follow the configured
/// policy (lambda = 0 by default, skipped when island_skip is set).
TtcOutcome ttc_overall(const Network& net, const TransferDirection& dir,
                       const LimitSet& limits,
                       const std::vector<ContingencyCase>& contingencies,
                       const TtcOptions& opt = {});

/// Packaged per-sample evaluator: applies a sample row to the base
/// network, then computes the overall transfer capability.
struct TtcEvaluator {
  Network base;
  ResolvedMapping mapping;
  TransferDirection direction;
  LimitSet limits;
  std::vector<ContingencyCase> contingencies;
  TtcOptions options;

  TtcOutcome outcome(const Eigen::VectorXd& row) const;
  double operator()(const Eigen::VectorXd& row) const;
};

}  // namespace ddspce

#include "ddspce/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ddspce/errors.hpp"
#include "ddspce/power_curves.hpp"

namespace ddspce {

TransferDirection build_direction(const Transaction& t) {
  if (t.sources.empty()) throw EmptySideError("transaction has no source buses");
  if (t.sinks.empty()) throw EmptySideError("transaction has no sink buses");
  double src_total = 0.0, sink_total = 0.0;
  for (const auto& s : t.sources) {
    if (!(s.share > 0.0)) throw EmptySideError("source shares must be positive");
    src_total += s.share;
  }
  for (const auto& s : t.sinks) {
    if (!(s.share > 0.0)) throw EmptySideError("sink shares must be positive");
    sink_total += s.share;
  }
  const double pf = std::clamp(t.sink_power_factor, 1e-3, 1.0);
  const double tan_phi = std::tan(std::acos(pf));

  TransferDirection d;
  for (const auto& s : t.sources)
    d.delta_pg.push_back({s.bus, s.share / src_total});
  for (const auto& s : t.sinks) {
    const double w = s.share / sink_total;
    d.delta_pl.push_back({s.bus, w});
    d.delta_ql.push_back({s.bus, w * tan_phi});
  }
  return d;
}

LimitSet LimitSet::from_network(const Network& net) {
  LimitSet l;
  const int n = static_cast<int>(net.buses.size());
  l.v_min.resize(n);
  l.v_max.resize(n);
  for (int i = 0; i < n; ++i) {
    l.v_min[i] = net.buses[static_cast<size_t>(i)].v_min;
    l.v_max[i] = net.buses[static_cast<size_t>(i)].v_max;
  }
  // Network files use 0 for "no thermal limit"; the limit set keeps that
  // as +inf so an explicit zero limit stays meaningful.
  for (const auto& br : net.branches)
    l.s_max_mva.push_back(br.s_max_mva > 0.0
                              ? br.s_max_mva
                              : std::numeric_limits<double>::infinity());
  for (const auto& g : net.generators) {
    l.p_min_mw.push_back(g.p_min_mw);
    l.p_max_mw.push_back(g.p_max_mw);
    l.q_min_mvar.push_back(g.q_min_mvar);
    l.q_max_mvar.push_back(g.q_max_mvar);
  }
  return l;
}

LimitSet LimitSet::relaxed(double v_margin, double thermal_scale) const {
  LimitSet l = *this;
  l.v_min.array() -= v_margin;
  l.v_max.array() += v_margin;
  for (auto& s : l.s_max_mva) s *= thermal_scale;
  return l;
}

const char* violation_tag(Violation::Type t) {
  switch (t) {
    case Violation::Type::Voltage: return "voltage";
    case Violation::Type::Thermal: return "thermal";
    case Violation::Type::GenP: return "gen-P";
    default: return "gen-Q";
  }
}

std::vector<Violation> check_limits(const Network& net,
                                    const PowerFlowSolution& sol,
                                    const LimitSet& limits) {
  std::vector<Violation> out;
  const int n = static_cast<int>(net.buses.size());
  for (int i = 0; i < n; ++i) {
    const double v = sol.v_mag[i];
    const std::string loc = "bus " + std::to_string(net.buses[static_cast<size_t>(i)].id);
    if (v < limits.v_min[i] - 1e-9)
      out.push_back({Violation::Type::Voltage, loc,
                     (limits.v_min[i] - v) / limits.v_min[i]});
    else if (v > limits.v_max[i] + 1e-9)
      out.push_back({Violation::Type::Voltage, loc,
                     (v - limits.v_max[i]) / limits.v_max[i]});
  }
  for (size_t k = 0; k < net.branches.size(); ++k) {
    if (!net.branches[k].in_service) continue;
    const double cap = limits.s_max_mva[k];
    if (!std::isfinite(cap)) continue;
    const double s = std::max(std::abs(sol.s_from_mva[k]), std::abs(sol.s_to_mva[k]));
    if (s > cap + 1e-6)
      out.push_back({Violation::Type::Thermal, "branch " + net.branches[k].id,
                     (s - cap) / std::max(cap, 1.0)});
  }
  for (size_t gi = 0; gi < net.generators.size(); ++gi) {
    if (!net.generators[gi].in_service) continue;
    const std::string loc = "generator " + net.generators[gi].id;
    const double p = sol.gen_p_mw[gi], q = sol.gen_q_mvar[gi];
    const double pscale = std::max(std::abs(limits.p_max_mw[gi]), 1.0);
    const double qscale = std::max(std::abs(limits.q_max_mvar[gi]), 1.0);
    if (p > limits.p_max_mw[gi] + 1e-6)
      out.push_back({Violation::Type::GenP, loc, (p - limits.p_max_mw[gi]) / pscale});
    else if (p < limits.p_min_mw[gi] - 1e-6)
      out.push_back({Violation::Type::GenP, loc, (limits.p_min_mw[gi] - p) / pscale});
    if (q > limits.q_max_mvar[gi] + 1e-6)
      out.push_back({Violation::Type::GenQ, loc, (q - limits.q_max_mvar[gi]) / qscale});
    else if (q < limits.q_min_mvar[gi] - 1e-6)
      out.push_back({Violation::Type::GenQ, loc, (limits.q_min_mvar[gi] - q) / qscale});
  }
  return out;
}

namespace {

// Network at transfer level lambda: sink loads grow along the direction,
// source generation follows but is capped at each unit's maximum. Returns
// false in `within_caps` when every source bus is fully capped.
Network network_at_lambda(const Network& net, const TransferDirection& dir,
                          double lambda, bool& fully_capped) {
  Network out = net;
  for (const auto& e : dir.delta_pl)
    out.buses[static_cast<size_t>(out.bus_index(e.bus))].p_load_mw +=
        lambda * e.mw_per_lambda;
  for (const auto& e : dir.delta_ql)
    out.buses[static_cast<size_t>(out.bus_index(e.bus))].q_load_mvar +=
        lambda * e.mw_per_lambda;

  fully_capped = !dir.delta_pg.empty();
  for (const auto& e : dir.delta_pg) {
    double want = lambda * e.mw_per_lambda;
    if (want <= 1e-9) {
      fully_capped = false;  // nothing requested from this bus
      continue;
    }
    // Allocate the bus increment across its units in table order, each
    // unit capped at its maximum.
    for (auto& g : out.generators) {
      if (!g.in_service || g.bus != e.bus) continue;
      const double take = std::clamp(want, 0.0, std::max(g.p_max_mw - g.p_mw, 0.0));
      g.p_mw += take;
      want -= take;
      if (want <= 1e-9) break;
    }
    if (want <= 1e-9) fully_capped = false;  // request fully served
  }
  return out;
}

struct LevelProbe {
  bool feasible = false;
  std::string tag;
  PowerFlowSolution sol;
};

LevelProbe probe_level(const Network& net, const TransferDirection& dir,
                       const LimitSet& limits, const TtcOptions& opt,
                       double lambda, const PowerFlowSolution* warm) {
  LevelProbe p;
  bool fully_capped = false;
  const Network instance = network_at_lambda(net, dir, lambda, fully_capped);
  if (fully_capped) {
    p.tag = "gen-P";
    return p;
  }
  try {
    p.sol = solve_power_flow(instance, opt.pf, warm);
  } catch (const IslandedError&) {
    p.tag = "islanded";
    return p;
  }
  if (!p.sol.converged) {
    p.tag = "diverged";
    return p;
  }
  const auto violations = check_limits(instance, p.sol, limits);
  if (!violations.empty()) {
    const auto worst = std::max_element(
        violations.begin(), violations.end(),
        [](const Violation& a, const Violation& b) { return a.magnitude < b.magnitude; });
    p.tag = violation_tag(worst->type);
    return p;
  }
  p.feasible = true;
  return p;
}

}  // namespace

TransferResult max_transfer(const Network& net, const TransferDirection& dir,
                            const LimitSet& limits, const TtcOptions& opt) {
  TransferResult result;
  LevelProbe base = probe_level(net, dir, limits, opt, 0.0, nullptr);
  if (!base.feasible) {
    result.lambda_mw = 0.0;
    result.binding = base.tag;
    return result;
  }

  double lo = 0.0;
  PowerFlowSolution lo_sol = base.sol;
  double hi = -1.0;
  std::string hi_tag;

  // Geometric step-up to bracket the infeasible side.
  double lambda = opt.lambda_step_mw;
  for (;;) {
    if (lambda > opt.lambda_cap_mw)
      throw UnboundedTransferError(
          "no limit binds below the lambda search cap; check the limit set");
    LevelProbe p = probe_level(net, dir, limits, opt, lambda, &lo_sol);
    if (p.feasible) {
      lo = lambda;
      lo_sol = std::move(p.sol);
      lambda *= 2.0;
    } else {
      hi = lambda;
      hi_tag = p.tag;
      break;
    }
  }

  while (hi - lo > opt.lambda_tol_mw) {
    const double mid = 0.5 * (lo + hi);
    LevelProbe p = probe_level(net, dir, limits, opt, mid, &lo_sol);
    if (p.feasible) {
      lo = mid;
      lo_sol = std::move(p.sol);
    } else {
      hi = mid;
      hi_tag = p.tag;
    }
  }
  result.lambda_mw = lo;
  result.binding = hi_tag;
  return result;
}

namespace {

// Islanding policy: the case supports no transfer when a load bus, a
// generator or a transaction bus is separated from the slack island.
// Islands made only of empty buses are dropped and the rest is solved.
std::optional<Network> reduce_to_slack_island(const Network& net,
                                              const TransferDirection& dir) {
  const auto islands = check_connectivity(net);
  if (islands.size() == 1) return net;

  const int slack = net.slack_index();
  std::vector<char> in_main(net.buses.size(), 0);
  for (const auto& island : islands)
    if (std::find(island.begin(), island.end(), slack) != island.end())
      for (int i : island) in_main[static_cast<size_t>(i)] = 1;

  std::set<int> direction_buses;
  for (const auto& e : dir.delta_pg) direction_buses.insert(e.bus);
  for (const auto& e : dir.delta_pl) direction_buses.insert(e.bus);

  for (size_t i = 0; i < net.buses.size(); ++i) {
    if (in_main[i]) continue;
    const Bus& b = net.buses[i];
    if (b.p_load_mw != 0.0 || b.q_load_mvar != 0.0) return std::nullopt;
    if (direction_buses.count(b.id)) return std::nullopt;
  }
  for (const auto& g : net.generators)
    if (g.in_service && !in_main[static_cast<size_t>(net.bus_index(g.bus))])
      return std::nullopt;
  for (const auto& w : net.wind_farms)
    if (w.p_out_mw > 0.0 && !in_main[static_cast<size_t>(net.bus_index(w.bus))])
      return std::nullopt;
  for (const auto& s : net.solar_plants)
    if (s.p_out_mw > 0.0 && !in_main[static_cast<size_t>(net.bus_index(s.bus))])
      return std::nullopt;

  // Safe to drop the dead islands.
  Network out = net;
  out.buses.clear();
  for (size_t i = 0; i < net.buses.size(); ++i)
    if (in_main[i]) out.buses.push_back(net.buses[i]);
  out.branches.clear();
  for (const auto& br : net.branches) {
    const bool keep = in_main[static_cast<size_t>(net.bus_index(br.from))] &&
                      in_main[static_cast<size_t>(net.bus_index(br.to))];
    if (keep) out.branches.push_back(br);
  }
  out.ultc.clear();
  for (const auto& u : net.ultc)
    if (out.branch_index(u.branch_id) >= 0 && out.bus_index(u.controlled_bus) >= 0)
      out.ultc.push_back(u);
  return out;
}

}  // namespace

TtcOutcome ttc_overall(const Network& net, const TransferDirection& dir,
                       const LimitSet& limits,
                       const std::vector<ContingencyCase>& contingencies,
                       const TtcOptions& opt) {
  for (const auto& c : contingencies)
    for (const auto& id : c.branch_ids)
      if (net.branch_index(id) < 0)
        throw ConfigError("contingency " + c.label + " references missing branch " + id);

  TtcOutcome outcome;
  for (int kappa = 0; kappa <= static_cast<int>(contingencies.size()); ++kappa) {
    Network instance = net;
    std::string label = "base";
    if (kappa > 0) {
      const auto& c = contingencies[static_cast<size_t>(kappa - 1)];
      label = c.label;
      for (const auto& id : c.branch_ids)
        instance.branches[static_cast<size_t>(instance.branch_index(id))].in_service = false;
    }
    TtcCaseResult r;
    r.label = label;

    const auto reduced = reduce_to_slack_island(instance, dir);
    if (!reduced.has_value()) {
      if (opt.island_skip && kappa > 0) continue;
      r.lambda_mw = 0.0;
      r.binding = "islanded";
      outcome.per_case.push_back(std::move(r));
      continue;
    }
    // Rebuild limits for the reduced bus set when buses were dropped.
    LimitSet case_limits = limits;
    if (reduced->buses.size() != net.buses.size() ||
        reduced->branches.size() != net.branches.size()) {
      case_limits = LimitSet::from_network(*reduced);
    }
    if (kappa > 0 &&
        (opt.contingency_v_margin != 0.0 || opt.contingency_thermal_scale != 1.0))
      case_limits = case_limits.relaxed(opt.contingency_v_margin,
                                        opt.contingency_thermal_scale);
    const TransferResult tr = max_transfer(*reduced, dir, case_limits, opt);
    r.lambda_mw = tr.lambda_mw;
    r.binding = tr.binding;
    outcome.per_case.push_back(std::move(r));
  }

  if (outcome.per_case.empty()) {
    outcome.lambda_ttc = 0.0;
    outcome.binding_case = 0;
    return outcome;
  }
  int best = 0;
  for (size_t i = 1; i < outcome.per_case.size(); ++i)
    if (outcome.per_case[i].lambda_mw < outcome.per_case[static_cast<size_t>(best)].lambda_mw)
      best = static_cast<int>(i);
  outcome.lambda_ttc = outcome.per_case[static_cast<size_t>(best)].lambda_mw;
  outcome.binding_case = best;
  return outcome;
}

TtcOutcome TtcEvaluator::outcome(const Eigen::VectorXd& row) const {
  const Network instance = apply_sample(base, mapping, row);
  return ttc_overall(instance, direction, limits, contingencies, options);
}

double TtcEvaluator::operator()(const Eigen::VectorXd& row) const {
  return outcome(row).lambda_ttc;
}

}  // namespace ddspce

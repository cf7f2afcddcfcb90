#include "ddspce/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ddspce/errors.hpp"
#include "ddspce/power_curves.hpp"

namespace ddspce {

namespace {

using cplx = std::complex<double>;

struct BranchAdmittance {
  cplx yff, yft, ytf, ytt;
};

// Per-bus net fixed injections in pu (generation positive, load negative),
// renewable plants folded in as P-Q injections.
struct BusInjections {
  Eigen::VectorXd p_fixed;   // P from non-slack generation + renewables - load
  Eigen::VectorXd q_fixed;   // Q from renewables - load (generator Q excluded)
  Eigen::VectorXd gen_q_min; // summed in-service generator limits, pu
  Eigen::VectorXd gen_q_max;
};

Eigen::MatrixXcd build_ybus(const Network& net, const std::vector<double>& taps,
                            std::vector<BranchAdmittance>& two_port) {
  const int n = static_cast<int>(net.buses.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  two_port.assign(net.branches.size(), {});
  for (size_t k = 0; k < net.branches.size(); ++k) {
    const Branch& br = net.branches[k];
    if (!br.in_service) continue;
    const int f = net.bus_index(br.from);
    const int t = net.bus_index(br.to);
    const cplx ys = 1.0 / cplx(br.r, br.x);
    const cplx bc(0.0, br.b / 2.0);
    const double tap = taps[k] != 0.0 ? taps[k] : 1.0;
    BranchAdmittance a;
    a.yff = (ys + bc) / (tap * tap);
    a.yft = -ys / tap;
    a.ytf = -ys / tap;
    a.ytt = ys + bc;
    two_port[k] = a;
    y(f, f) += a.yff;
    y(f, t) += a.yft;
    y(t, f) += a.ytf;
    y(t, t) += a.ytt;
  }
  return y;
}

BusInjections collect_injections(const Network& net) {
  const int n = static_cast<int>(net.buses.size());
  BusInjections inj;
  inj.p_fixed = Eigen::VectorXd::Zero(n);
  inj.q_fixed = Eigen::VectorXd::Zero(n);
  inj.gen_q_min = Eigen::VectorXd::Zero(n);
  inj.gen_q_max = Eigen::VectorXd::Zero(n);
  const int slack = net.slack_index();
  for (int i = 0; i < n; ++i) {
    inj.p_fixed[i] -= net.buses[static_cast<size_t>(i)].p_load_mw / net.base_mva;
    inj.q_fixed[i] -= net.buses[static_cast<size_t>(i)].q_load_mvar / net.base_mva;
  }
  for (const auto& g : net.generators) {
    if (!g.in_service) continue;
    const int i = net.bus_index(g.bus);
    if (i != slack) inj.p_fixed[i] += g.p_mw / net.base_mva;
    inj.gen_q_min[i] += g.q_min_mvar / net.base_mva;
    inj.gen_q_max[i] += g.q_max_mvar / net.base_mva;
  }
  for (const auto& w : net.wind_farms) {
    const int i = net.bus_index(w.bus);
    inj.p_fixed[i] += w.p_out_mw / net.base_mva;
    inj.q_fixed[i] += wind_reactive(w.p_out_mw, w.power_factor) / net.base_mva;
  }
  for (const auto& s : net.solar_plants) {
    const int i = net.bus_index(s.bus);
    inj.p_fixed[i] += s.p_out_mw / net.base_mva;  // unity power factor
  }
  return inj;
}

enum class EffType { Slack, PV, QAtMin, QAtMax, PQ };

// Newton iterations for a fixed bus-type assignment. Returns true when the
// mismatch dropped below tolerance.
bool newton_solve(const Eigen::MatrixXcd& ybus, const Eigen::VectorXd& p_spec,
                  const Eigen::VectorXd& q_spec, const std::vector<EffType>& et,
                  const PowerFlowOptions& opt, Eigen::VectorXd& v,
                  Eigen::VectorXd& th, int& iterations, double& last_mismatch) {
  const int n = static_cast<int>(et.size());
  std::vector<int> ang, vm;
  for (int i = 0; i < n; ++i) {
    if (et[static_cast<size_t>(i)] != EffType::Slack) ang.push_back(i);
    if (et[static_cast<size_t>(i)] == EffType::PQ ||
        et[static_cast<size_t>(i)] == EffType::QAtMin ||
        et[static_cast<size_t>(i)] == EffType::QAtMax)
      vm.push_back(i);
  }
  const int na = static_cast<int>(ang.size());
  const int nv = static_cast<int>(vm.size());
  const Eigen::MatrixXd g = ybus.real(), b = ybus.imag();

  Eigen::VectorXd p(n), q(n);
  for (int it = 0; it <= opt.max_iterations; ++it) {
    // Injected powers at the current state.
    for (int i = 0; i < n; ++i) {
      double pi = 0.0, qi = 0.0;
      for (int j = 0; j < n; ++j) {
        const double tij = th[i] - th[j];
        const double c = std::cos(tij), s = std::sin(tij);
        pi += v[j] * (g(i, j) * c + b(i, j) * s);
        qi += v[j] * (g(i, j) * s - b(i, j) * c);
      }
      p[i] = v[i] * pi;
      q[i] = v[i] * qi;
    }
    Eigen::VectorXd mis(na + nv);
    for (int k = 0; k < na; ++k) mis[k] = p_spec[ang[static_cast<size_t>(k)]] - p[ang[static_cast<size_t>(k)]];
    for (int k = 0; k < nv; ++k) mis[na + k] = q_spec[vm[static_cast<size_t>(k)]] - q[vm[static_cast<size_t>(k)]];
    last_mismatch = mis.size() > 0 ? mis.cwiseAbs().maxCoeff() : 0.0;
    iterations = it;
    if (!std::isfinite(last_mismatch) || last_mismatch > 1e8) return false;
    if (last_mismatch < opt.tolerance_pu) return true;
    if (it == opt.max_iterations) return false;

    Eigen::MatrixXd jac(na + nv, na + nv);
    for (int r = 0; r < na; ++r) {
      const int i = ang[static_cast<size_t>(r)];
      for (int c2 = 0; c2 < na; ++c2) {
        const int j = ang[static_cast<size_t>(c2)];
        if (i == j)
          jac(r, c2) = -q[i] - b(i, i) * v[i] * v[i];
        else {
          const double tij = th[i] - th[j];
          jac(r, c2) = v[i] * v[j] * (g(i, j) * std::sin(tij) - b(i, j) * std::cos(tij));
        }
      }
      for (int c2 = 0; c2 < nv; ++c2) {
        const int j = vm[static_cast<size_t>(c2)];
        if (i == j)
          jac(r, na + c2) = p[i] / v[i] + g(i, i) * v[i];
        else {
          const double tij = th[i] - th[j];
          jac(r, na + c2) = v[i] * (g(i, j) * std::cos(tij) + b(i, j) * std::sin(tij));
        }
      }
    }
    for (int r = 0; r < nv; ++r) {
      const int i = vm[static_cast<size_t>(r)];
      for (int c2 = 0; c2 < na; ++c2) {
        const int j = ang[static_cast<size_t>(c2)];
        if (i == j)
          jac(na + r, c2) = p[i] - g(i, i) * v[i] * v[i];
        else {
          const double tij = th[i] - th[j];
          jac(na + r, c2) = -v[i] * v[j] * (g(i, j) * std::cos(tij) + b(i, j) * std::sin(tij));
        }
      }
      for (int c2 = 0; c2 < nv; ++c2) {
        const int j = vm[static_cast<size_t>(c2)];
        if (i == j)
          jac(na + r, na + c2) = q[i] / v[i] - b(i, i) * v[i];
        else {
          const double tij = th[i] - th[j];
          jac(na + r, na + c2) = v[i] * (g(i, j) * std::sin(tij) - b(i, j) * std::cos(tij));
        }
      }
    }

    const Eigen::VectorXd dx = jac.partialPivLu().solve(mis);
    if (!dx.allFinite()) return false;
    for (int k = 0; k < na; ++k) th[ang[static_cast<size_t>(k)]] += dx[k];
    for (int k = 0; k < nv; ++k) {
      double& vi = v[vm[static_cast<size_t>(k)]];
      vi += dx[na + k];
      if (vi < 1e-3) vi = 1e-3;  // keep magnitudes physical
    }
  }
  return false;
}

}  // namespace

std::vector<std::vector<int>> check_connectivity(const Network& net) {
  const int n = static_cast<int>(net.buses.size());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& br : net.branches) {
    if (!br.in_service) continue;
    const int f = net.bus_index(br.from), t = net.bus_index(br.to);
    adj[static_cast<size_t>(f)].push_back(t);
    adj[static_cast<size_t>(t)].push_back(f);
  }
  std::vector<int> color(static_cast<size_t>(n), -1);
  std::vector<std::vector<int>> islands;
  for (int s = 0; s < n; ++s) {
    if (color[static_cast<size_t>(s)] >= 0) continue;
    std::vector<int> stack = {s}, members;
    color[static_cast<size_t>(s)] = static_cast<int>(islands.size());
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (int w : adj[static_cast<size_t>(u)]) {
        if (color[static_cast<size_t>(w)] < 0) {
          color[static_cast<size_t>(w)] = static_cast<int>(islands.size());
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    islands.push_back(std::move(members));
  }
  return islands;
}

PowerFlowSolution solve_power_flow(const Network& net,
                                   const PowerFlowOptions& options,
                                   const PowerFlowSolution* warm_start) {
  net.validate();
  if (check_connectivity(net).size() != 1)
    throw IslandedError("network is not connected over in-service branches");

  const int n = static_cast<int>(net.buses.size());
  const int slack = net.slack_index();
  const BusInjections inj = collect_injections(net);

  // Working tap vector; ULTC taps may move, others stay at their ratio.
  std::vector<double> taps(net.branches.size());
  for (size_t k = 0; k < net.branches.size(); ++k) taps[k] = net.branches[k].tap;
  std::vector<int> ultc_branch(net.ultc.size(), -1);
  for (size_t u = 0; u < net.ultc.size(); ++u) {
    const int k = net.branch_index(net.ultc[u].branch_id);
    ultc_branch[u] = k;
    double t0 = taps[static_cast<size_t>(k)];
    if (warm_start && !warm_start->taps.empty())
      t0 = warm_start->taps[static_cast<size_t>(k)];
    taps[static_cast<size_t>(k)] =
        std::clamp(t0, net.ultc[u].tap_min, net.ultc[u].tap_max);
  }

  // Effective bus types; PV buses without in-service generation cannot
  // hold their setpoint and act as loads.
  std::vector<EffType> et(static_cast<size_t>(n), EffType::PQ);
  std::vector<char> has_gen(static_cast<size_t>(n), 0);
  for (const auto& g : net.generators)
    if (g.in_service) has_gen[static_cast<size_t>(net.bus_index(g.bus))] = 1;
  for (int i = 0; i < n; ++i) {
    const Bus& b = net.buses[static_cast<size_t>(i)];
    if (i == slack)
      et[static_cast<size_t>(i)] = EffType::Slack;
    else if (b.type == BusType::PV && has_gen[static_cast<size_t>(i)])
      et[static_cast<size_t>(i)] = EffType::PV;
  }

  // State initialization: flat start or warm start.
  Eigen::VectorXd v(n), th(n);
  for (int i = 0; i < n; ++i) {
    const Bus& b = net.buses[static_cast<size_t>(i)];
    const bool fixed_v = et[static_cast<size_t>(i)] == EffType::Slack ||
                         et[static_cast<size_t>(i)] == EffType::PV;
    if (warm_start && warm_start->v_mag.size() == n) {
      v[i] = fixed_v ? b.v_setpoint : warm_start->v_mag[i];
      th[i] = warm_start->v_ang[i];
    } else {
      v[i] = fixed_v ? b.v_setpoint : 1.0;
      th[i] = 0.0;
    }
  }
  th.array() -= th[slack];  // slack angle reference

  PowerFlowSolution sol;
  sol.taps = taps;
  sol.converged = false;

  const int max_tap_rounds = [&] {
    int r = 16;
    for (const auto& u : net.ultc)
      r += static_cast<int>((u.tap_max - u.tap_min) / u.tap_step) + 2;
    return r;
  }();
  std::vector<int> ultc_dir_memory(net.ultc.size(), 0);  // last move direction
  std::vector<char> ultc_frozen(net.ultc.size(), 0);

  std::vector<BranchAdmittance> two_port;
  Eigen::MatrixXcd ybus;
  int total_iterations = 0;
  bool converged = false;

  for (int tap_round = 0; tap_round < std::max(1, max_tap_rounds); ++tap_round) {
    ybus = build_ybus(net, taps, two_port);

    // Reactive-limit loop: solve, pin PV buses that violate a generator
    // limit, release pinned buses whose voltage recovered.
    Eigen::VectorXd q_spec = inj.q_fixed;
    converged = false;
    for (int qround = 0; qround < 12; ++qround) {
      for (int i = 0; i < n; ++i) {
        if (et[static_cast<size_t>(i)] == EffType::QAtMax)
          q_spec[i] = inj.q_fixed[i] + inj.gen_q_max[i];
        else if (et[static_cast<size_t>(i)] == EffType::QAtMin)
          q_spec[i] = inj.q_fixed[i] + inj.gen_q_min[i];
        else
          q_spec[i] = inj.q_fixed[i];
      }
      int iters = 0;
      converged = newton_solve(ybus, inj.p_fixed, q_spec, et, options, v, th,
                               iters, sol.max_mismatch_pu);
      total_iterations += iters;
      if (!converged) break;
      if (!options.enforce_q_limits) break;

      // Reactive power each PV bus must generate to hold its setpoint.
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        if (i == slack) continue;
        const Bus& bus = net.buses[static_cast<size_t>(i)];
        if (et[static_cast<size_t>(i)] == EffType::PV) {
          double qi = 0.0;
          for (int j = 0; j < n; ++j) {
            const double tij = th[i] - th[j];
            qi += v[j] * (ybus.real()(i, j) * std::sin(tij) -
                          ybus.imag()(i, j) * std::cos(tij));
          }
          qi *= v[i];
          const double q_gen = qi - inj.q_fixed[i];
          if (q_gen > inj.gen_q_max[i] + 1e-7) {
            et[static_cast<size_t>(i)] = EffType::QAtMax;
            changed = true;
          } else if (q_gen < inj.gen_q_min[i] - 1e-7) {
            et[static_cast<size_t>(i)] = EffType::QAtMin;
            changed = true;
          }
        } else if (et[static_cast<size_t>(i)] == EffType::QAtMax &&
                   v[i] > bus.v_setpoint + 1e-9) {
          et[static_cast<size_t>(i)] = EffType::PV;
          v[i] = bus.v_setpoint;
          changed = true;
        } else if (et[static_cast<size_t>(i)] == EffType::QAtMin &&
                   v[i] < bus.v_setpoint - 1e-9) {
          et[static_cast<size_t>(i)] = EffType::PV;
          v[i] = bus.v_setpoint;
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (!converged) break;

    // ULTC stepping toward the voltage band.
    bool moved = false;
    for (size_t u = 0; u < net.ultc.size(); ++u) {
      if (ultc_frozen[u]) continue;
      const UltcTransformer& ut = net.ultc[u];
      const int k = ultc_branch[u];
      const int cb = net.bus_index(ut.controlled_bus);
      const double vc = v[cb];
      if (vc >= ut.v_lo && vc <= ut.v_hi) continue;
      // Raising the ratio lowers the to-side voltage; if the controlled
      // bus is the from side the sensitivity flips.
      const bool from_side =
          net.branches[static_cast<size_t>(k)].from == ut.controlled_bus;
      const double sens = from_side ? +1.0 : -1.0;
      const double want = vc < ut.v_lo ? +1.0 : -1.0;  // desired voltage move
      const int dir = static_cast<int>(want * sens);
      if (ultc_dir_memory[u] != 0 && dir != ultc_dir_memory[u]) {
        // The band was crossed by a single step; stop dithering.
        ultc_frozen[u] = 1;
        continue;
      }
      double& tap = taps[static_cast<size_t>(k)];
      double next;
      if (options.continuous_tap) {
        const double target = 0.5 * (ut.v_lo + ut.v_hi);
        next = from_side ? tap * target / vc : tap * vc / target;
      } else {
        next = tap + dir * ut.tap_step;
      }
      next = std::clamp(next, ut.tap_min, ut.tap_max);
      if (std::abs(next - tap) < 1e-12) continue;  // at a tap limit
      tap = next;
      ultc_dir_memory[u] = dir;
      moved = true;
    }
    if (!moved) break;
  }

  sol.v_mag = v;
  sol.v_ang = th;
  sol.iterations = total_iterations;
  sol.converged = converged;
  sol.taps = taps;
  sol.s_from_mva.assign(net.branches.size(), cplx(0, 0));
  sol.s_to_mva.assign(net.branches.size(), cplx(0, 0));
  sol.gen_p_mw.assign(net.generators.size(), 0.0);
  sol.gen_q_mvar.assign(net.generators.size(), 0.0);
  if (!converged) return sol;

  // Branch flows.
  std::vector<cplx> vc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) vc[static_cast<size_t>(i)] = std::polar(v[i], th[i]);
  for (size_t k = 0; k < net.branches.size(); ++k) {
    if (!net.branches[k].in_service) continue;
    const int f = net.bus_index(net.branches[k].from);
    const int t = net.bus_index(net.branches[k].to);
    const auto& a = two_port[k];
    sol.s_from_mva[k] = vc[static_cast<size_t>(f)] *
                        std::conj(a.yff * vc[static_cast<size_t>(f)] +
                                  a.yft * vc[static_cast<size_t>(t)]) *
                        net.base_mva;
    sol.s_to_mva[k] = vc[static_cast<size_t>(t)] *
                      std::conj(a.ytf * vc[static_cast<size_t>(f)] +
                                a.ytt * vc[static_cast<size_t>(t)]) *
                      net.base_mva;
  }

  // Realized generator outputs: bus-level requirements distributed over
  // the units by their capability ranges.
  Eigen::VectorXd p_inj(n), q_inj(n);
  for (int i = 0; i < n; ++i) {
    cplx acc(0, 0);
    for (int j = 0; j < n; ++j) acc += ybus(i, j) * vc[static_cast<size_t>(j)];
    const cplx s = vc[static_cast<size_t>(i)] * std::conj(acc);
    p_inj[i] = s.real();
    q_inj[i] = s.imag();
  }
  for (int i = 0; i < n; ++i) {
    std::vector<size_t> units;
    for (size_t gidx = 0; gidx < net.generators.size(); ++gidx)
      if (net.generators[gidx].in_service &&
          net.bus_index(net.generators[gidx].bus) == i)
        units.push_back(gidx);
    if (units.empty()) continue;
    const double q_gen_bus = (q_inj[i] - inj.q_fixed[i]) * net.base_mva;
    double q_range = 0.0;
    for (size_t gidx : units)
      q_range += net.generators[gidx].q_max_mvar - net.generators[gidx].q_min_mvar;
    for (size_t gidx : units) {
      const auto& g = net.generators[gidx];
      const double w = q_range > 0.0
                           ? (g.q_max_mvar - g.q_min_mvar) / q_range
                           : 1.0 / static_cast<double>(units.size());
      sol.gen_q_mvar[gidx] = q_gen_bus * w;
    }
    if (i == slack) {
      const double p_gen_bus = (p_inj[i] - inj.p_fixed[i]) * net.base_mva;
      double p_range = 0.0;
      for (size_t gidx : units)
        p_range += net.generators[gidx].p_max_mw - net.generators[gidx].p_min_mw;
      for (size_t gidx : units) {
        const auto& g = net.generators[gidx];
        const double w = p_range > 0.0
                             ? (g.p_max_mw - g.p_min_mw) / p_range
                             : 1.0 / static_cast<double>(units.size());
        sol.gen_p_mw[gidx] = p_gen_bus * w;
      }
    } else {
      for (size_t gidx : units) sol.gen_p_mw[gidx] = net.generators[gidx].p_mw;
    }
  }
  return sol;
}

double max_power_mismatch(const Network& net, const PowerFlowSolution& sol) {
  const int n = static_cast<int>(net.buses.size());
  std::vector<double> taps = sol.taps;
  if (taps.empty()) {
    taps.resize(net.branches.size());
    for (size_t k = 0; k < net.branches.size(); ++k) taps[k] = net.branches[k].tap;
  }
  std::vector<BranchAdmittance> two_port;
  const Eigen::MatrixXcd ybus = build_ybus(net, taps, two_port);
  std::vector<cplx> vc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    vc[static_cast<size_t>(i)] = std::polar(sol.v_mag[i], sol.v_ang[i]);

  // Power balance with realized injections at every bus.
  Eigen::VectorXd p_spec = Eigen::VectorXd::Zero(n), q_spec = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    p_spec[i] -= net.buses[static_cast<size_t>(i)].p_load_mw / net.base_mva;
    q_spec[i] -= net.buses[static_cast<size_t>(i)].q_load_mvar / net.base_mva;
  }
  for (size_t gidx = 0; gidx < net.generators.size(); ++gidx) {
    if (!net.generators[gidx].in_service) continue;
    const int i = net.bus_index(net.generators[gidx].bus);
    p_spec[i] += sol.gen_p_mw[gidx] / net.base_mva;
    q_spec[i] += sol.gen_q_mvar[gidx] / net.base_mva;
  }
  for (const auto& w : net.wind_farms) {
    const int i = net.bus_index(w.bus);
    p_spec[i] += w.p_out_mw / net.base_mva;
    q_spec[i] += wind_reactive(w.p_out_mw, w.power_factor) / net.base_mva;
  }
  for (const auto& s : net.solar_plants)
    p_spec[net.bus_index(s.bus)] += s.p_out_mw / net.base_mva;

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    cplx acc(0, 0);
    for (int j = 0; j < n; ++j) acc += ybus(i, j) * vc[static_cast<size_t>(j)];
    const cplx s = vc[static_cast<size_t>(i)] * std::conj(acc);
    worst = std::max(worst, std::abs(p_spec[i] - s.real()));
    worst = std::max(worst, std::abs(q_spec[i] - s.imag()));
  }
  return worst;
}

}  // namespace ddspce

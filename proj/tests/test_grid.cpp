#include <doctest.h>

#include <cmath>

#include "ddspce/errors.hpp"
#include "ddspce/network.hpp"
#include "ddspce/power_curves.hpp"
#include "ddspce/power_flow.hpp"
#include "support/synth.hpp"

using namespace ddspce;

namespace {

std::string data_path(const std::string& name) {
  return std::string(DDSPCE_DATA_DIR) + "/" + name;
}

// Remove branches one by one in random orders; the island count must be
// non-decreasing along every removal sequence.
void testsupport_island_monotonicity(const Network& base) {
  testsupport::Rng rng(301);
  for (int trial = 0; trial < 8; ++trial) {
    Network net = base;
    size_t islands = check_connectivity(net).size();
    std::vector<size_t> order(net.branches.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (size_t k = order.size(); k > 1; --k)
      std::swap(order[k - 1],
                order[static_cast<size_t>(rng.uniform() * k)]);
    for (size_t k : order) {
      net.branches[k].in_service = false;
      const size_t now = check_connectivity(net).size();
      CHECK(now >= islands);
      islands = now;
    }
  }
}

// Two-bus fixture: slack feeding a PQ load over x = 0.1 pu.
Network two_bus(double p_load_mw, double q_load_mvar) {
  Network net;
  net.base_mva = 100.0;
  net.buses = {{1, BusType::Slack, 1.0, 0.5, 1.5, 0.0, 0.0},
               {2, BusType::PQ, 1.0, 0.5, 1.5, p_load_mw, q_load_mvar}};
  net.branches.push_back({"L1-2", 1, 2, 0.0, 0.1, 0.0, 1.0, 0.0, true});
  net.generators.push_back({"G1", 1, 0.0, -500.0, 500.0, 0.0, 1000.0, true});
  return net;
}

}  // namespace

TEST_CASE("wind power curve branch values") {
  WindFarm w;
  w.v_in = 3.0;
  w.v_rated = 12.0;
  w.v_out = 25.0;
  w.p_rated_mw = 2.0;
  CHECK(wind_power(3.0, w) == 0.0);             // at cut-in
  CHECK(wind_power(12.0, w) == 2.0);            // at rated
  CHECK(wind_power(7.5, w) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wind_power(20.0, w) == 2.0);            // between rated and cut-out
  CHECK(wind_power(25.0, w) == 2.0);            // at cut-out, still rated
  CHECK(wind_power(25.0001, w) == 0.0);         // beyond cut-out
  CHECK(wind_power(0.0, w) == 0.0);

  // Continuity everywhere except the cut-out drop.
  for (double v : {3.0, 12.0}) {
    const double below = wind_power(v - 1e-9, w);
    const double above = wind_power(v + 1e-9, w);
    CHECK(std::abs(above - below) < 1e-7);
  }
  CHECK(wind_reactive(2.0, 0.85) ==
        doctest::Approx(-2.0 * std::tan(std::acos(0.85))).epsilon(1e-14));
  CHECK(wind_reactive(2.0, 1.0) == 0.0);
}

TEST_CASE("solar power curve knots and segments") {
  SolarPlant p;
  p.r_rated = 800.0;
  p.p_rated_mw = 30.0;
  p.r_c = 150.0;
  CHECK(solar_power(0.0, p) == 0.0);
  CHECK(solar_power(800.0, p) == 30.0);
  CHECK(solar_power(400.0, p) == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(solar_power(1200.0, p) == 30.0);
  for (double r : {150.0, 800.0}) {
    const double below = solar_power(r - 1e-9, p);
    const double above = solar_power(r + 1e-9, p);
    CHECK(std::abs(above - below) < 1e-7);
  }
}

TEST_CASE("network JSON round trip and validation") {
  const Network net = load_network(data_path("case9.json"));
  CHECK(net.buses.size() == 9);
  CHECK(net.branches.size() == 9);
  const Network again = parse_network_json(network_to_json_string(net));
  CHECK(again.buses.size() == 9);
  CHECK(again.branches[1].x == net.branches[1].x);

  Network bad = net;
  bad.buses[0].type = BusType::PQ;  // no slack left
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("apply_sample drives plants, loads and outages") {
  Network net = two_bus(50.0, 20.0);
  net.wind_farms.push_back({"W1", 2, 3.0, 12.0, 25.0, 10.0, 0.85, 0.0});
  net.sample_mapping = {{"wind", SampleColumnRole::Kind::Wind, "W1"},
                        {"load", SampleColumnRole::Kind::Load, "2"},
                        {"line", SampleColumnRole::Kind::Outage, "L1-2"}};
  const ResolvedMapping rm = resolve_mapping(net, {"wind", "load", "line"});

  Eigen::VectorXd base_row(3);
  base_row << 0.0, 50.0, 1.0;  // no wind, base load, line in
  const Network base = apply_sample(net, rm, base_row);
  CHECK(base.wind_farms[0].p_out_mw == 0.0);
  CHECK(base.buses[1].p_load_mw == 50.0);
  CHECK(base.buses[1].q_load_mvar == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(base.branches[0].in_service);

  Eigen::VectorXd row(3);
  row << 7.5, 55.0, 0.0;
  const Network inst = apply_sample(net, rm, row);
  CHECK(inst.wind_farms[0].p_out_mw == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(inst.buses[1].p_load_mw == 55.0);
  // Reactive load keeps the base power factor (ratio 20/50).
  CHECK(inst.buses[1].q_load_mvar == doctest::Approx(22.0).epsilon(1e-12));
  CHECK_FALSE(inst.branches[0].in_service);

  Eigen::VectorXd bad = row;
  bad[2] = 0.3;  // not a 0/1 indicator
  CHECK_THROWS_AS(apply_sample(net, rm, bad), MappingMismatchError);

  CHECK_THROWS_AS(resolve_mapping(net, {"wind", "load"}), MappingMismatchError);
}

TEST_CASE("check_connectivity islands") {
  Network net = load_network(data_path("case9.json"));
  CHECK(check_connectivity(net).size() == 1);

  Network cut = net;
  cut.branches[static_cast<size_t>(cut.branch_index("T1-4"))].in_service = false;
  const auto islands = check_connectivity(cut);
  CHECK(islands.size() == 2);  // slack bus isolated

  // Removing one ring branch keeps the rest connected.
  Network ring = net;
  ring.branches[static_cast<size_t>(ring.branch_index("L4-5"))].in_service = false;
  CHECK(check_connectivity(ring).size() == 1);
}

TEST_CASE("two-bus power flow matches the closed-form solution") {
  // P = 0.5 pu, Q = 0: sin(2*theta) = -P/5, V = cos(theta).
  const Network net = two_bus(50.0, 0.0);
  const PowerFlowSolution sol = solve_power_flow(net);
  REQUIRE(sol.converged);
  const double theta = 0.5 * std::asin(-0.5 / 5.0);
  CHECK(sol.v_ang[1] == doctest::Approx(theta).epsilon(1e-8));
  CHECK(sol.v_mag[1] == doctest::Approx(std::cos(theta)).epsilon(1e-8));
  CHECK(max_power_mismatch(net, sol) < 1e-8);

  // Zero load: flat profile immediately.
  const PowerFlowSolution flat = solve_power_flow(two_bus(0.0, 0.0));
  CHECK(flat.converged);
  CHECK(flat.v_mag[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(flat.v_ang[1]) < 1e-12);
}

TEST_CASE("WSCC 9-bus case matches the published solution") {
  // Frozen oracle: classic textbook solution of the Western System
  // 3-machine case, verified against an independent numeric solve.
  const Network net = load_network(data_path("case9.json"));
  const PowerFlowSolution sol = solve_power_flow(net);
  REQUIRE(sol.converged);

  const double v_expected[9] = {1.04,         1.025,        1.025,
                                1.0257883928, 0.9956308580, 1.0126543240,
                                1.0257693724, 1.0158825836, 1.0323529490};
  const double ang_deg_expected[9] = {0.0,       9.280005,  4.664751,
                                      -2.216788, -3.988805, -3.687396,
                                      3.719701,  0.727536,  1.966716};
  for (int i = 0; i < 9; ++i) {
    CHECK(sol.v_mag[i] == doctest::Approx(v_expected[i]).epsilon(1e-4));
    CHECK(sol.v_ang[i] * 180.0 / M_PI ==
          doctest::Approx(ang_deg_expected[i]).scale(1.0).epsilon(2e-4));
  }
  CHECK(max_power_mismatch(net, sol) < 1e-8);
  CHECK(sol.gen_p_mw[0] == doctest::Approx(71.641021).epsilon(1e-4));
  CHECK(sol.gen_q_mvar[0] == doctest::Approx(27.045924).epsilon(1e-3));
  CHECK(sol.gen_q_mvar[1] == doctest::Approx(6.653660).scale(1.0).epsilon(1e-3));
  CHECK(sol.gen_q_mvar[2] == doctest::Approx(-10.859709).scale(1.0).epsilon(1e-3));
}

TEST_CASE("PV bus switches to PQ at its reactive limit and back off") {
  Network net = two_bus(80.0, 60.0);
  // Add a PV bus 3 holding 1.02 pu with a tight Q_max.
  net.buses.push_back({3, BusType::PV, 1.02, 0.5, 1.5, 0.0, 0.0});
  net.branches.push_back({"L2-3", 2, 3, 0.01, 0.08, 0.0, 1.0, 0.0, true});
  net.generators.push_back({"G3", 3, 20.0, -5.0, 5.0, 0.0, 100.0, true});

  const PowerFlowSolution sol = solve_power_flow(net);
  REQUIRE(sol.converged);
  // The limit binds: Q pinned at 5 MVar and the setpoint is lost.
  CHECK(sol.gen_q_mvar[1] == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(sol.v_mag[2] < 1.02);

  // With a generous limit the setpoint holds.
  net.generators[1].q_max_mvar = 500.0;
  const PowerFlowSolution sol2 = solve_power_flow(net);
  REQUIRE(sol2.converged);
  CHECK(sol2.v_mag[2] == doctest::Approx(1.02).epsilon(1e-9));

  // Disabling enforcement holds the setpoint regardless.
  net.generators[1].q_max_mvar = 5.0;
  PowerFlowOptions opt;
  opt.enforce_q_limits = false;
  const PowerFlowSolution sol3 = solve_power_flow(net, opt);
  REQUIRE(sol3.converged);
  CHECK(sol3.v_mag[2] == doctest::Approx(1.02).epsilon(1e-9));
  CHECK(sol3.gen_q_mvar[1] > 5.0);
}

TEST_CASE("ULTC steps the controlled bus into its band") {
  // Slack -> line -> transformer -> load bus; the load pulls the voltage
  // below the band and the tap must compensate.
  Network net;
  net.base_mva = 100.0;
  net.buses = {{1, BusType::Slack, 1.0, 0.5, 1.5, 0.0, 0.0},
               {2, BusType::PQ, 1.0, 0.5, 1.5, 0.0, 0.0},
               {3, BusType::PQ, 1.0, 0.5, 1.5, 60.0, 25.0}};
  net.branches.push_back({"L1-2", 1, 2, 0.01, 0.06, 0.0, 1.0, 0.0, true});
  net.branches.push_back({"T2-3", 2, 3, 0.0, 0.08, 0.0, 1.0, 0.0, true});
  net.generators.push_back({"G1", 1, 0.0, -500.0, 500.0, 0.0, 1000.0, true});

  const PowerFlowSolution before = solve_power_flow(net);
  REQUIRE(before.converged);
  CHECK(before.v_mag[2] < 0.97);

  net.ultc.push_back({"T2-3", 3, 0.98, 1.0, 0.85, 1.15, 0.00625});
  const PowerFlowSolution after = solve_power_flow(net);
  REQUIRE(after.converged);
  CHECK(after.v_mag[2] >= 0.98 - 1e-9);
  CHECK(after.v_mag[2] <= 1.0 + 1e-9);
  CHECK(after.taps[1] < 1.0);  // ratio moved to raise the to-side voltage
  CHECK(max_power_mismatch(net, after) < 1e-8);

  // Continuous-tap mode reaches the band as well.
  PowerFlowOptions copt;
  copt.continuous_tap = true;
  const PowerFlowSolution cont = solve_power_flow(net, copt);
  REQUIRE(cont.converged);
  CHECK(cont.v_mag[2] >= 0.98 - 1e-9);
  CHECK(cont.v_mag[2] <= 1.0 + 1e-9);
}

TEST_CASE("removing branches never decreases the island count") {
  const Network net = load_network(data_path("case9.json"));
  testsupport_island_monotonicity(net);
}

TEST_CASE("power balance at convergence: generation = load + losses") {
  const Network net = load_network(data_path("case9.json"));
  const PowerFlowSolution sol = solve_power_flow(net);
  REQUIRE(sol.converged);
  double gen = 0.0, load = 0.0, branch_losses = 0.0;
  for (double p : sol.gen_p_mw) gen += p;
  for (const auto& b : net.buses) load += b.p_load_mw;
  for (size_t k = 0; k < net.branches.size(); ++k)
    branch_losses += sol.s_from_mva[k].real() + sol.s_to_mva[k].real();
  CHECK(branch_losses >= 0.0);  // non-negative resistance everywhere
  CHECK(gen == doctest::Approx(load + branch_losses).epsilon(1e-8));
}

TEST_CASE("solver reports divergence and islanding distinctly") {
  // A hopeless load level diverges (nose point exceeded).
  const Network heavy = two_bus(2000.0, 800.0);
  const PowerFlowSolution sol = solve_power_flow(heavy);
  CHECK_FALSE(sol.converged);

  Network cut = two_bus(10.0, 0.0);
  cut.branches[0].in_service = false;
  CHECK_THROWS_AS(solve_power_flow(cut), IslandedError);
}

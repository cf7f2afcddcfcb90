#pragma once

#include <complex>
#include <vector>

#include "ddspce/network.hpp"

namespace ddspce {

struct PowerFlowOptions {
  double tolerance_pu = 1e-8;
  int max_iterations = 50;
  bool enforce_q_limits = true;
  bool continuous_tap = false;  // ULTC ratio moves continuously instead of stepping
};

struct PowerFlowSolution {
  Eigen::VectorXd v_mag;   // pu, network bus order
  Eigen::VectorXd v_ang;   // rad, slack at 0
  std::vector<double> gen_p_mw;
  std::vector<double> gen_q_mvar;
  std::vector<std::complex<double>> s_from_mva;  // per branch, 0 if out of service
  std::vector<std::complex<double>> s_to_mva;
  std::vector<double> taps;  // final ratios (ULTC action included)
  bool converged = false;
  int iterations = 0;
  double max_mismatch_pu = 0.0;
};

/// Full-Newton AC power flow in polar form. PV buses move to PQ at their
/// reactive limits (and may switch back); ULTC transformers step their
/// taps toward the voltage band between solves. Non-convergence is
/// reported through the `converged` flag; a disconnected network throws
/// IslandedError.
PowerFlowSolution solve_power_flow(const Network& net,
                                   const PowerFlowOptions& options = {},
                                   const PowerFlowSolution* warm_start = nullptr);

/// Connected components over in-service branches (bus indices).
std::vector<std::vector<int>> check_connectivity(const Network& net);

/// Re-evaluate the mismatch of the power-flow equations at a solution,
/// independent of how it was obtained (certificate check).
double max_power_mismatch(const Network& net, const PowerFlowSolution& sol);

}  // namespace ddspce

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddspce/assess.hpp"

namespace ddspce {

/// Surrogate-vs-reference statistics block (reference is normally the
/// Monte Carlo baseline), with normalized deltas in percent.
struct MethodComparison {
  double mu_reference = 0.0;
  double sigma_reference = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double delta_mu_pct = 0.0;
  double delta_sigma_pct = 0.0;
};

/// Available transfer capability at one confidence level:
///   TRM = mean - quantile(1 - P_cl/100),
///   ATC = E[TTC] - TRM - ETC - CBM (exact arithmetic identity).
struct AtcReport {
  double expected_ttc_mw = 0.0;
  double confidence_level_pct = 0.0;
  double trm_mw = 0.0;
  double etc_mw = 0.0;
  double cbm_mw = 0.0;
  double atc_mw = 0.0;
  std::optional<MethodComparison> comparison;

  std::string to_json_string() const;
};

AtcReport compute_trm_atc(const DistributionSummary& s, double p_cl_pct,
                          double etc_mw, double cbm_mw);

MethodComparison compare_methods(const DistributionSummary& reference,
                                 const DistributionSummary& surrogate);

/// Human-readable table over several confidence levels, mirroring the
/// usual TRM/ATC report layout.
std::string render_atc_table(const std::vector<AtcReport>& reports);

std::string atc_reports_to_json_string(const std::vector<AtcReport>& reports);

}  // namespace ddspce

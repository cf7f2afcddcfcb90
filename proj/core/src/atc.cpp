#include "ddspce/atc.hpp"

#include <cstdio>

#include <json.hpp>

#include "ddspce/errors.hpp"

namespace ddspce {

AtcReport compute_trm_atc(const DistributionSummary& s, double p_cl_pct,
                          double etc_mw, double cbm_mw) {
  if (!(p_cl_pct > 0.0) || !(p_cl_pct < 100.0))
    throw ConfigError("confidence level must lie strictly between 0 and 100");
  AtcReport r;
  r.expected_ttc_mw = s.mean;
  r.confidence_level_pct = p_cl_pct;
  r.trm_mw = s.mean - s.quantile(1.0 - p_cl_pct / 100.0);
  r.etc_mw = etc_mw;
  r.cbm_mw = cbm_mw;
  r.atc_mw = r.expected_ttc_mw - r.trm_mw - r.etc_mw - r.cbm_mw;
  return r;
}

MethodComparison compare_methods(const DistributionSummary& reference,
                                 const DistributionSummary& surrogate) {
  MethodComparison c;
  c.mu_reference = reference.mean;
  c.sigma_reference = reference.stddev;
  c.mu = surrogate.mean;
  c.sigma = surrogate.stddev;
  c.delta_mu_pct = reference.mean != 0.0
                       ? (surrogate.mean - reference.mean) / reference.mean * 100.0
                       : 0.0;
  c.delta_sigma_pct =
      reference.stddev != 0.0
          ? (surrogate.stddev - reference.stddev) / reference.stddev * 100.0
          : 0.0;
  return c;
}

namespace {

nlohmann::json report_to_json(const AtcReport& r) {
  nlohmann::json j;
  j["expected_ttc_mw"] = r.expected_ttc_mw;
  j["confidence_level_pct"] = r.confidence_level_pct;
  j["trm_mw"] = r.trm_mw;
  j["etc_mw"] = r.etc_mw;
  j["cbm_mw"] = r.cbm_mw;
  j["atc_mw"] = r.atc_mw;
  if (r.comparison) {
    j["comparison"] = {{"mu_reference", r.comparison->mu_reference},
                       {"sigma_reference", r.comparison->sigma_reference},
                       {"mu", r.comparison->mu},
                       {"sigma", r.comparison->sigma},
                       {"delta_mu_pct", r.comparison->delta_mu_pct},
                       {"delta_sigma_pct", r.comparison->delta_sigma_pct}};
  }
  return j;
}

}  // namespace

std::string AtcReport::to_json_string() const {
  return report_to_json(*this).dump(2);
}

std::string atc_reports_to_json_string(const std::vector<AtcReport>& reports) {
  nlohmann::json j;
  j["format_version"] = 1;
  auto& arr = j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return j.dump(2);
}

std::string render_atc_table(const std::vector<AtcReport>& reports) {
  std::string out;
  char line[160];
  out += "Confid. Level |  E[TTC] (MW) |    TRM (MW) |    ATC (MW)\n";
  out += "--------------+--------------+-------------+------------\n";
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%12.1f%% | %12.4f | %11.4f | %11.4f\n",
                  r.confidence_level_pct, r.expected_ttc_mw, r.trm_mw, r.atc_mw);
    out += line;
  }
  if (!reports.empty() && reports.front().comparison) {
    const auto& c = *reports.front().comparison;
    out += "\nIndex  |     reference |     surrogate |  delta/ref %\n";
    out += "-------+---------------+---------------+-------------\n";
    std::snprintf(line, sizeof line, "mu     | %13.4f | %13.4f | %11.4f\n",
                  c.mu_reference, c.mu, c.delta_mu_pct);
    out += line;
    std::snprintf(line, sizeof line, "sigma  | %13.4f | %13.4f | %11.4f\n",
                  c.sigma_reference, c.sigma, c.delta_sigma_pct);
    out += line;
  }
  return out;
}

}  // namespace ddspce

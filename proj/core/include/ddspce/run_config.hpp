#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddspce/network.hpp"
#include "ddspce/pce_model.hpp"
#include "ddspce/transfer.hpp"

namespace ddspce {

/// Declarative description of one study, loaded from a JSON document.
/// CLI flags may override individual fields after loading.
struct RunConfig {
  std::string network_path;
  std::string training_samples_path;
  std::string evaluation_samples_path;  // optional large set (M_s)
  std::vector<SampleColumnRole> mapping;  // overrides the network's when set
  Transaction transaction;
  std::vector<ContingencyCase> contingencies;
  std::optional<double> v_min_override;  // global voltage band overrides, pu
  std::optional<double> v_max_override;
  FitConfig fit;
  TtcOptions ttc;
  std::vector<double> confidence_levels = {99.0, 98.0, 95.0, 90.0, 80.0};
  double etc_mw = 0.0;
  double cbm_mw = 0.0;
  int histogram_bins = 50;
  std::string output_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
  unsigned seed = 0;

  static RunConfig load(const std::string& path);
  static RunConfig from_json_string(const std::string& text);
};

/// The network named by the config with overrides applied: mapping
/// replacement and global voltage-band overrides folded into the buses.
Network load_configured_network(const RunConfig& cfg);

/// Fully wired per-sample TTC evaluator for the configured study.
TtcEvaluator build_evaluator(const RunConfig& cfg, const Network& net,
                             const std::vector<std::string>& column_names);

}  // namespace ddspce

#include "ddspce/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "ddspce/assess.hpp"
#include "ddspce/atc.hpp"
#include "ddspce/errors.hpp"
#include "ddspce/fit.hpp"

namespace ddspce {

namespace {

namespace fs = std::filesystem;

void ensure_output_dir(const RunConfig& cfg) {
  if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void write_value_csv(const std::string& path, const std::string& header,
                     const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write " + path);
  out << header << '\n';
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

void write_distribution_files(const RunConfig& cfg, const std::string& tag,
                              const std::vector<double>& values,
                              const DistributionSummary& summary) {
  write_value_csv(out_path(cfg, "ttc_" + tag + ".csv"), "ttc_mw", values);
  summary.save(out_path(cfg, "summary_" + tag + ".json"));

  char buf[96];
  {
    std::ofstream out(out_path(cfg, "histogram_" + tag + ".csv"), std::ios::binary);
    out << "bin_center,count\n";
    for (size_t b = 0; b + 1 < summary.histogram.edges.size(); ++b) {
      const double center =
          0.5 * (summary.histogram.edges[b] + summary.histogram.edges[b + 1]);
      std::snprintf(buf, sizeof buf, "%.17g,%d\n", center,
                    summary.histogram.counts[b]);
      out << buf;
    }
  }
  {
    std::ofstream out(out_path(cfg, "cdf_" + tag + ".csv"), std::ios::binary);
    out << "value,cum_prob\n";
    const double n = static_cast<double>(summary.sorted.size());
    for (size_t i = 0; i < summary.sorted.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", summary.sorted[i],
                    (static_cast<double>(i) + 1.0) / n);
      out << buf;
    }
  }
}

int map_error(const Error& e, std::ostream& log) {
  log << "error: " << e.what() << '\n';
  if (dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const MissingFileError*>(&e) ||
      dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const MappingMismatchError*>(&e) ||
      dynamic_cast<const ModelMismatchError*>(&e) ||
      dynamic_cast<const EmptyDataError*>(&e))
    return kExitConfigError;
  return kExitNumericalError;
}

}  // namespace

int cmd_fit(const RunConfig& cfg, std::ostream& log) {
  try {
    ensure_output_dir(cfg);
    const Network net = load_configured_network(cfg);
    const SampleMatrix pool = load_samples(cfg.training_samples_path);
    const TtcEvaluator evaluator = build_evaluator(cfg, net, pool.column_names);

    const FitResult fit =
        fit_sparse_pce([&](const Eigen::VectorXd& row) { return evaluator(row); },
                       pool, {}, cfg.fit, cfg.workers);

    fit.model.save(out_path(cfg, "model.json"));

    nlohmann::json jlog;
    jlog["converged"] = fit.converged;
    jlog["evaluator_calls"] = fit.evaluator_calls;
    auto& rounds = jlog["rounds"] = nlohmann::json::array();
    for (const auto& r : fit.rounds)
      rounds.push_back({{"training_size", r.training_size},
                        {"e_cloo", r.e_cloo},
                        {"active_terms", r.active_terms},
                        {"candidate_terms", r.candidate_terms}});
    std::ofstream flog(out_path(cfg, "fit_log.json"), std::ios::binary);
    flog << jlog.dump(2) << '\n';

    for (const auto& r : fit.rounds)
      log << "round M_p=" << r.training_size << " e_cloo=" << r.e_cloo
          << " active=" << r.active_terms << "/" << r.candidate_terms << '\n';
    log << "model written to " << out_path(cfg, "model.json") << '\n';
    if (!fit.converged) {
      log << "training budget exhausted before reaching e_stop="
          << cfg.fit.e_stop << " (best e_cloo=" << fit.model.e_cloo << ")\n";
      return kExitBudgetExhausted;
    }
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

int cmd_mcs(const RunConfig& cfg, std::ostream& log) {
  try {
    ensure_output_dir(cfg);
    const Network net = load_configured_network(cfg);
    const std::string samples_path = cfg.evaluation_samples_path.empty()
                                         ? cfg.training_samples_path
                                         : cfg.evaluation_samples_path;
    const SampleMatrix samples = load_samples(samples_path);
    const TtcEvaluator evaluator = build_evaluator(cfg, net, samples.column_names);

    const std::vector<double> ttc = mcs_evaluate(
        [&](const Eigen::VectorXd& row) { return evaluator(row); }, samples,
        cfg.workers);
    const DistributionSummary summary = summarize(ttc, cfg.histogram_bins);
    write_distribution_files(cfg, "mcs", ttc, summary);
    log << "MCS over " << ttc.size() << " samples: mean=" << summary.mean
        << " MW, stddev=" << summary.stddev << " MW\n";
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

int cmd_evaluate(const RunConfig& cfg, const std::string& model_path,
                 std::ostream& log) {
  try {
    ensure_output_dir(cfg);
    const PceModel model = PceModel::load(model_path);
    const std::string samples_path = cfg.evaluation_samples_path.empty()
                                         ? cfg.training_samples_path
                                         : cfg.evaluation_samples_path;
    const SampleMatrix samples = load_samples(samples_path);
    if (model.dimension() != samples.cols())
      throw ModelMismatchError("model expects " +
                               std::to_string(model.dimension()) +
                               " inputs, samples provide " +
                               std::to_string(samples.cols()));
    if (!model.input_columns.empty() &&
        model.input_columns != samples.column_names)
      throw ModelMismatchError(
          "sample columns do not match the model's input layout");

    const Eigen::VectorXd values = model.evaluate(samples);
    const std::vector<double> ttc(values.data(), values.data() + values.size());
    const DistributionSummary summary = summarize(ttc, cfg.histogram_bins);
    write_distribution_files(cfg, "ddspce", ttc, summary);
    log << "surrogate evaluated on " << ttc.size()
        << " samples: mean=" << summary.mean << " MW, stddev=" << summary.stddev
        << " MW\n";
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

int cmd_atc(const RunConfig& cfg, const std::string& summary_path,
            const std::string& reference_summary_path, std::ostream& log) {
  try {
    ensure_output_dir(cfg);
    const DistributionSummary summary = DistributionSummary::load(summary_path);
    std::optional<MethodComparison> comparison;
    if (!reference_summary_path.empty()) {
      const DistributionSummary reference =
          DistributionSummary::load(reference_summary_path);
      comparison = compare_methods(reference, summary);
    }

    std::vector<AtcReport> reports;
    for (double pcl : cfg.confidence_levels) {
      AtcReport r = compute_trm_atc(summary, pcl, cfg.etc_mw, cfg.cbm_mw);
      r.comparison = comparison;
      reports.push_back(r);
    }
    {
      std::ofstream out(out_path(cfg, "atc_report.json"), std::ios::binary);
      out << atc_reports_to_json_string(reports) << '\n';
    }
    const std::string table = render_atc_table(reports);
    {
      std::ofstream out(out_path(cfg, "atc_report.txt"), std::ios::binary);
      out << table;
    }
    log << table;
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

int cmd_report(const RunConfig& cfg, const std::string& model_path,
               std::ostream& log) {
  const int rc = cmd_evaluate(cfg, model_path, log);
  if (rc != kExitOk) return rc;
  const std::string mcs_summary = out_path(cfg, "summary_mcs.json");
  const std::string reference =
      std::filesystem::exists(mcs_summary) ? mcs_summary : std::string();
  return cmd_atc(cfg, out_path(cfg, "summary_ddspce.json"), reference, log);
}

}  // namespace ddspce

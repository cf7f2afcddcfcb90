#pragma once

#include <iosfwd>
#include <string>

#include "ddspce/run_config.hpp"

namespace ddspce {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitNumericalError = 2,
  kExitBudgetExhausted = 3,
};

/// fit: train the sparse surrogate on the training samples and write
/// model.json plus fit_log.json into the output directory. Returns
/// kExitBudgetExhausted when the error target was not met (the best
/// model is still written).
int cmd_fit(const RunConfig& cfg, std::ostream& log);

/// mcs: direct Monte Carlo over the training (or explicitly given)
/// sample file; writes ttc_mcs.csv, summary_mcs.json, histogram_mcs.csv,
/// cdf_mcs.csv.
int cmd_mcs(const RunConfig& cfg, std::ostream& log);

/// evaluate: run a fitted surrogate over the evaluation sample set;
/// writes ttc_ddspce.csv, summary_ddspce.json, histogram/cdf CSVs.
int cmd_evaluate(const RunConfig& cfg, const std::string& model_path,
                 std::ostream& log);

/// atc: TRM/ATC reports per confidence level from a summary file; the
/// optional reference summary adds the method-comparison block. Writes
/// atc_report.json and atc_report.txt.
int cmd_atc(const RunConfig& cfg, const std::string& summary_path,
            const std::string& reference_summary_path, std::ostream& log);

/// report: evaluate followed by atc on the produced summary (reference
/// defaults to the mcs summary when present in the output directory).
int cmd_report(const RunConfig& cfg, const std::string& model_path,
               std::ostream& log);

}  // namespace ddspce

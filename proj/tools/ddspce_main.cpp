// ddspce: fit data-driven sparse PCE surrogates of probabilistic total
// transfer capability and turn them into TRM/ATC reports.
//
//   ddspce fit      -c config.json
//   ddspce mcs      -c config.json
//   ddspce evaluate -c config.json -m out/model.json
//   ddspce atc      -c config.json -s out/summary_ddspce.json [-r out/summary_mcs.json]
//   ddspce report   -c config.json -m out/model.json

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ddspce/errors.hpp"
#include "ddspce/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  int workers = -1;
  unsigned seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* app, CommonArgs& args) {
  app->add_option("-c,--config", args.config_path, "Run configuration JSON")
      ->required();
  app->add_option("-o,--output-dir", args.output_dir,
                  "Override the configured output directory");
  app->add_option("-w,--workers", args.workers,
                  "Worker threads (default: configured value)");
  app->add_option("--seed", args.seed, "Override the configured RNG seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

ddspce::RunConfig load_config(const CommonArgs& args) {
  ddspce::RunConfig cfg = ddspce::RunConfig::load(args.config_path);
  if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
  if (args.workers >= 0) cfg.workers = args.workers;
  if (args.seed_set) {
    cfg.seed = args.seed;
    cfg.fit.seed = args.seed;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven sparse PCE assessment of probabilistic TTC/ATC"};
  app.require_subcommand(1);

  CommonArgs fit_args, mcs_args, eval_args, atc_args, report_args;
  std::string model_path, summary_path, reference_path;

  CLI::App* fit = app.add_subcommand("fit", "Fit the sparse PCE surrogate");
  add_common(fit, fit_args);

  CLI::App* mcs = app.add_subcommand("mcs", "Direct Monte Carlo baseline");
  add_common(mcs, mcs_args);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Evaluate a fitted surrogate on samples");
  add_common(evaluate, eval_args);
  evaluate->add_option("-m,--model", model_path, "Model JSON file")->required();

  CLI::App* atc = app.add_subcommand("atc", "TRM/ATC report from a summary");
  add_common(atc, atc_args);
  atc->add_option("-s,--summary", summary_path, "Distribution summary JSON")
      ->required();
  atc->add_option("-r,--reference", reference_path,
                  "Reference summary for the comparison block");

  CLI::App* report =
      app.add_subcommand("report", "evaluate + atc in one step");
  add_common(report, report_args);
  report->add_option("-m,--model", model_path, "Model JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return ddspce::kExitConfigError;
  }

  try {
    if (fit->parsed()) return ddspce::cmd_fit(load_config(fit_args), std::cout);
    if (mcs->parsed()) return ddspce::cmd_mcs(load_config(mcs_args), std::cout);
    if (evaluate->parsed())
      return ddspce::cmd_evaluate(load_config(eval_args), model_path, std::cout);
    if (atc->parsed())
      return ddspce::cmd_atc(load_config(atc_args), summary_path, reference_path,
                             std::cout);
    if (report->parsed())
      return ddspce::cmd_report(load_config(report_args), model_path, std::cout);
  } catch (const ddspce::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ddspce::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ddspce::kExitNumericalError;
  }
  return ddspce::kExitConfigError;
}

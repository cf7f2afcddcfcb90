#include "ddspce/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddspce/errors.hpp"

namespace ddspce {

namespace {

SampleColumnRole::Kind kind_from_text(const std::string& s) {
  if (s == "wind") return SampleColumnRole::Kind::Wind;
  if (s == "solar") return SampleColumnRole::Kind::Solar;
  if (s == "load") return SampleColumnRole::Kind::Load;
  if (s == "outage") return SampleColumnRole::Kind::Outage;
  throw ConfigError("unknown mapping kind '" + s + "'");
}

}  // namespace

namespace {

RunConfig parse_run_config(const nlohmann::json& j);

}  // namespace

RunConfig RunConfig::from_json_string(const std::string& text) {
  try {
    return parse_run_config(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON invalid: ") + e.what());
  }
}

namespace {

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig c;
  c.network_path = j.at("network").get<std::string>();
  c.training_samples_path = j.at("training_samples").get<std::string>();
  c.evaluation_samples_path = j.value("evaluation_samples", std::string());

  for (const auto& jm : j.value("mapping", nlohmann::json::array())) {
    SampleColumnRole r;
    r.column = jm.at("column").get<std::string>();
    r.kind = kind_from_text(jm.at("kind").get<std::string>());
    r.target = jm.at("target").is_number()
                   ? std::to_string(jm.at("target").get<int>())
                   : jm.at("target").get<std::string>();
    c.mapping.push_back(r);
  }

  const auto& jt = j.at("transaction");
  for (const auto& js : jt.at("sources"))
    c.transaction.sources.push_back(
        {js.at("bus").get<int>(), js.value("share", 1.0)});
  for (const auto& js : jt.at("sinks"))
    c.transaction.sinks.push_back(
        {js.at("bus").get<int>(), js.value("share", 1.0)});
  c.transaction.sink_power_factor = jt.value("sink_power_factor", 1.0);

  for (const auto& jc : j.value("contingencies", nlohmann::json::array())) {
    ContingencyCase cc;
    cc.label = jc.at("label").get<std::string>();
    cc.branch_ids = jc.at("branches").get<std::vector<std::string>>();
    c.contingencies.push_back(cc);
  }

  if (j.contains("limits")) {
    const auto& jl = j.at("limits");
    if (jl.contains("v_min")) c.v_min_override = jl.at("v_min").get<double>();
    if (jl.contains("v_max")) c.v_max_override = jl.at("v_max").get<double>();
  }

  if (j.contains("fit")) {
    const auto& jf = j.at("fit");
    c.fit.degree = jf.value("degree", 2);
    c.fit.q_norm = jf.value("q_norm", 0.75);
    c.fit.e_stop = jf.value("e_stop", 0.02);
    c.fit.initial_mp = jf.value("initial_mp", 0);
    c.fit.delta_mp = jf.value("delta_mp", 0);
    c.fit.max_mp = jf.value("max_mp", 0);
  }

  if (j.contains("ttc")) {
    const auto& jo = j.at("ttc");
    c.ttc.lambda_tol_mw = jo.value("lambda_tol_mw", 0.1);
    c.ttc.lambda_step_mw = jo.value("lambda_step_mw", 10.0);
    c.ttc.lambda_cap_mw = jo.value("lambda_cap_mw", 1e6);
    c.ttc.island_skip = jo.value("islanding", std::string("zero")) == "skip";
    c.ttc.contingency_v_margin = jo.value("contingency_v_margin", 0.0);
    c.ttc.contingency_thermal_scale = jo.value("contingency_thermal_scale", 1.0);
    c.ttc.pf.tolerance_pu = jo.value("pf_tolerance_pu", 1e-8);
    c.ttc.pf.max_iterations = jo.value("pf_max_iterations", 50);
    c.ttc.pf.enforce_q_limits = jo.value("pf_enforce_q_limits", true);
    c.ttc.pf.continuous_tap = jo.value("continuous_tap", false);
  }

  if (j.contains("confidence_levels"))
    c.confidence_levels = j.at("confidence_levels").get<std::vector<double>>();
  c.etc_mw = j.value("etc_mw", 0.0);
  c.cbm_mw = j.value("cbm_mw", 0.0);
  c.histogram_bins = j.value("histogram_bins", 50);
  c.output_dir = j.value("output_dir", std::string("out"));
  c.workers = j.value("workers", 0);
  c.seed = j.value("seed", 0u);
  c.fit.seed = c.seed;
  c.fit.validate();
  return c;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

Network load_configured_network(const RunConfig& cfg) {
  Network net = load_network(cfg.network_path);
  if (!cfg.mapping.empty()) net.sample_mapping = cfg.mapping;
  if (cfg.v_min_override || cfg.v_max_override) {
    for (auto& b : net.buses) {
      if (cfg.v_min_override) b.v_min = *cfg.v_min_override;
      if (cfg.v_max_override) b.v_max = *cfg.v_max_override;
    }
  }
  net.validate();
  return net;
}

TtcEvaluator build_evaluator(const RunConfig& cfg, const Network& net,
                             const std::vector<std::string>& column_names) {
  TtcEvaluator ev;
  ev.base = net;
  ev.mapping = resolve_mapping(net, column_names);
  ev.direction = build_direction(cfg.transaction);
  ev.limits = LimitSet::from_network(net);
  ev.contingencies = cfg.contingencies;
  ev.options = cfg.ttc;
  for (const auto& e : ev.direction.delta_pg)
    if (net.bus_index(e.bus) < 0)
      throw ConfigError("transaction source bus " + std::to_string(e.bus) +
                        " not in the network");
  for (const auto& e : ev.direction.delta_pl)
    if (net.bus_index(e.bus) < 0)
      throw ConfigError("transaction sink bus " + std::to_string(e.bus) +
                        " not in the network");
  return ev;
}

}  // namespace ddspce

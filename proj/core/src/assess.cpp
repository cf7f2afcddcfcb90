#include "ddspce/assess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddspce/errors.hpp"
#include "ddspce/parallel.hpp"

namespace ddspce {

std::vector<double> mcs_evaluate(const RowEvaluator& evaluator,
                                 const SampleMatrix& samples, int workers,
                                 const ProgressHook& progress) {
  samples.validate();
  return parallel_map(
      static_cast<std::size_t>(samples.rows()), workers,
      [&](std::size_t i) {
        const Eigen::VectorXd row = samples.values.row(static_cast<Eigen::Index>(i));
        return evaluator(row);
      },
      progress);
}

DistributionSummary summarize(const std::vector<double>& values, int bins) {
  if (values.empty()) throw EmptyDataError("cannot summarize zero values");
  if (bins < 1) bins = 1;

  DistributionSummary s;
  s.count = values.size();
  s.sorted = values;
  std::sort(s.sorted.begin(), s.sorted.end());
  s.min = s.sorted.front();
  s.max = s.sorted.back();
  double acc = 0.0;
  for (double v : values) acc += v;
  s.mean = acc / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
  }

  s.histogram.edges.resize(static_cast<size_t>(bins) + 1);
  s.histogram.counts.assign(static_cast<size_t>(bins), 0);
  const double width = (s.max - s.min) / static_cast<double>(bins);
  for (int b = 0; b <= bins; ++b)
    s.histogram.edges[static_cast<size_t>(b)] = s.min + width * b;
  s.histogram.edges.back() = s.max;
  for (double v : values) {
    int b = width > 0.0 ? static_cast<int>((v - s.min) / width) : 0;
    b = std::clamp(b, 0, bins - 1);
    ++s.histogram.counts[static_cast<size_t>(b)];
  }
  return s;
}

double DistributionSummary::quantile(double p) const {
  if (sorted.empty()) throw EmptyDataError("summary holds no samples");
  p = std::clamp(p, 0.0, 1.0);
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::string DistributionSummary::to_json_string() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["count"] = count;
  j["mean"] = mean;
  j["stddev"] = stddev;
  j["min"] = min;
  j["max"] = max;
  j["histogram"] = {{"edges", histogram.edges}, {"counts", histogram.counts}};
  j["sorted_values"] = sorted;
  return j.dump(2);
}

DistributionSummary DistributionSummary::from_json_string(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format_version", 0) != 1)
      throw ConfigError("unsupported summary format version");
    DistributionSummary s;
    s.count = j.at("count").get<std::size_t>();
    s.mean = j.at("mean").get<double>();
    s.stddev = j.at("stddev").get<double>();
    s.min = j.at("min").get<double>();
    s.max = j.at("max").get<double>();
    s.histogram.edges = j.at("histogram").at("edges").get<std::vector<double>>();
    s.histogram.counts = j.at("histogram").at("counts").get<std::vector<int>>();
    s.sorted = j.at("sorted_values").get<std::vector<double>>();
    if (s.sorted.size() != s.count)
      throw ConfigError("summary sample count does not match sorted values");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("summary JSON invalid: ") + e.what());
  }
}

void DistributionSummary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write summary file: " + path);
  out << to_json_string() << '\n';
}

DistributionSummary DistributionSummary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open summary file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

}  // namespace ddspce

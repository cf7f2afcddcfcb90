#include "ddspce/pce_model.hpp"

#include <fstream>
#include <sstream>

#include "ddspce/design.hpp"
#include "ddspce/errors.hpp"
#include "json_detail.hpp"

namespace ddspce {

void FitConfig::validate() const {
  if (degree < 0) throw ConfigError("fit degree must be >= 0");
  if (!(q_norm > 0.0) || q_norm > 1.0) throw ConfigError("q-norm must be in (0, 1]");
  if (!(e_stop > 0.0)) throw ConfigError("e_stop must be positive");
  if (initial_mp < 0 || delta_mp < 0 || max_mp < 0)
    throw ConfigError("training sizes must be non-negative");
}

Eigen::VectorXd PceModel::evaluate(const SampleMatrix& samples) const {
  if (samples.cols() != dimension())
    throw DimensionMismatchError("model is " + std::to_string(dimension()) +
                                 "-dimensional, samples have " +
                                 std::to_string(samples.cols()) + " columns");
  const SampleMatrix zeta = apply_pca(pca, samples);
  Eigen::VectorXd out(samples.rows());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const Eigen::VectorXd row = zeta.values.row(i);
    double acc = 0.0;
    for (size_t k = 0; k < active_indices.size(); ++k)
      acc += coefficients[static_cast<Eigen::Index>(k)] *
             eval_multivariate(bases, active_indices[k], row);
    out[i] = acc;
  }
  return out;
}

std::pair<double, double> PceModel::moments() const {
  double mean = 0.0, var = 0.0;
  for (size_t k = 0; k < active_indices.size(); ++k) {
    const auto& alpha = active_indices[k];
    const double c = coefficients[static_cast<Eigen::Index>(k)];
    const bool constant =
        std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 0; });
    if (constant)
      mean = c;
    else
      var += c * c;
  }
  return {mean, var};
}

nlohmann::json basis_to_json(const UnivariateBasis& b) {
  nlohmann::json j;
  j["degree"] = b.degree;
  j["monic_coeffs"] = b.monic_coeffs;
  j["norms"] = b.norms;
  j["standardization"] = {{"shift", b.standardization.shift},
                          {"scale", b.standardization.scale}};
  return j;
}

UnivariateBasis basis_from_json(const nlohmann::json& j) {
  UnivariateBasis b;
  b.degree = j.at("degree").get<int>();
  b.monic_coeffs = j.at("monic_coeffs").get<std::vector<std::vector<double>>>();
  b.norms = j.at("norms").get<std::vector<double>>();
  b.standardization.shift = j.at("standardization").at("shift").get<double>();
  b.standardization.scale = j.at("standardization").at("scale").get<double>();
  return b;
}

std::string PceModel::to_json_string() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["pca"] = pca_to_json(pca);
  auto& jb = j["bases"] = nlohmann::json::array();
  for (const auto& b : bases) jb.push_back(basis_to_json(b));
  j["active_indices"] = active_indices;
  j["coefficients"] = std::vector<double>(
      coefficients.data(), coefficients.data() + coefficients.size());
  j["e_cloo"] = e_cloo;
  j["training_size"] = training_size;
  j["input_columns"] = input_columns;
  j["config"] = {{"degree", config.degree},   {"q_norm", config.q_norm},
                 {"e_stop", config.e_stop},   {"initial_mp", config.initial_mp},
                 {"delta_mp", config.delta_mp}, {"max_mp", config.max_mp},
                 {"seed", config.seed}};
  return j.dump(2);
}

namespace {
PceModel parse_model_fields(const nlohmann::json& j);
}

PceModel PceModel::from_json_string(const std::string& text) {
  try {
    return parse_model_fields(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model JSON invalid: ") + e.what());
  }
}

namespace {

PceModel parse_model_fields(const nlohmann::json& j) {
  if (j.value("format_version", 0) != 1)
    throw ConfigError("unsupported model format version");
  PceModel m;
  m.pca = from_pca_json(j.at("pca"));
  for (const auto& jb : j.at("bases")) m.bases.push_back(basis_from_json(jb));
  m.active_indices = j.at("active_indices").get<std::vector<MultiIndex>>();
  const auto c = j.at("coefficients").get<std::vector<double>>();
  m.coefficients = Eigen::Map<const Eigen::VectorXd>(
      c.data(), static_cast<Eigen::Index>(c.size()));
  m.e_cloo = j.at("e_cloo").get<double>();
  m.training_size = j.at("training_size").get<int>();
  m.input_columns =
      j.value("input_columns", std::vector<std::string>());
  const auto& jc = j.at("config");
  m.config.degree = jc.at("degree").get<int>();
  m.config.q_norm = jc.at("q_norm").get<double>();
  m.config.e_stop = jc.at("e_stop").get<double>();
  m.config.initial_mp = jc.at("initial_mp").get<int>();
  m.config.delta_mp = jc.at("delta_mp").get<int>();
  m.config.max_mp = jc.at("max_mp").get<int>();
  m.config.seed = jc.at("seed").get<unsigned>();
  if (m.coefficients.size() != static_cast<Eigen::Index>(m.active_indices.size()))
    throw ConfigError("model coefficients do not align with active indices");
  if (m.bases.size() != static_cast<size_t>(m.pca.retained))
    throw ConfigError("model basis count does not match PCA output width");
  return m;
}

}  // namespace

void PceModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write model file: " + path);
  out << to_json_string() << '\n';
}

PceModel PceModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

}  // namespace ddspce

#include "ddspce/pca.hpp"

#include <Eigen/Eigenvalues>

#include "ddspce/errors.hpp"
#include "json_detail.hpp"

namespace ddspce {

PcaTransform fit_pca(const SampleMatrix& s) {
  s.validate();
  const Eigen::Index m = s.rows(), n = s.cols();
  if (m < 2)
    throw InsufficientSamplesError("PCA needs at least 2 samples, got " +
                                   std::to_string(m));

  PcaTransform t;
  t.mean = s.values.colwise().mean();
  Eigen::MatrixXd centered = s.values.rowwise() - t.mean.transpose();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(m - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigen returns ascending eigenvalues; store descending.
  t.components.resize(n, n);
  t.eigenvalues.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.eigenvalues[i] = eig.eigenvalues()[n - 1 - i];
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - i);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    t.components.row(i) = v.transpose();
  }
  t.retained = n;
  return t;
}

SampleMatrix apply_pca(const PcaTransform& t, const SampleMatrix& s) {
  if (s.cols() != t.dimension())
    throw DimensionMismatchError("PCA transform is " +
                                 std::to_string(t.dimension()) +
                                 "-dimensional, samples have " +
                                 std::to_string(s.cols()) + " columns");
  SampleMatrix out;
  out.values = (s.values.rowwise() - t.mean.transpose()) *
               t.components.topRows(t.retained).transpose();
  out.column_names.reserve(t.retained);
  for (Eigen::Index i = 0; i < t.retained; ++i)
    out.column_names.push_back("pc" + std::to_string(i + 1));
  return out;
}

SampleMatrix inverse_pca(const PcaTransform& t, const SampleMatrix& s) {
  if (s.cols() != t.retained)
    throw DimensionMismatchError("expected " + std::to_string(t.retained) +
                                 " principal columns, got " +
                                 std::to_string(s.cols()));
  SampleMatrix out;
  out.values = (s.values * t.components.topRows(t.retained)).rowwise() +
               t.mean.transpose();
  out.column_names.resize(t.dimension());
  return out;
}

nlohmann::json pca_to_json(const PcaTransform& t) {
  nlohmann::json j;
  j["mean"] = std::vector<double>(t.mean.data(), t.mean.data() + t.mean.size());
  j["eigenvalues"] = std::vector<double>(
      t.eigenvalues.data(), t.eigenvalues.data() + t.eigenvalues.size());
  j["retained"] = t.retained;
  auto& rows = j["components"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < t.components.rows(); ++r) {
    std::vector<double> row(t.components.row(r).begin(), t.components.row(r).end());
    rows.push_back(row);
  }
  return j;
}

std::string PcaTransform::to_json_string() const {
  return pca_to_json(*this).dump();
}

PcaTransform from_pca_json(const nlohmann::json& j) {
  PcaTransform t;
  const auto mean = j.at("mean").get<std::vector<double>>();
  t.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                             static_cast<Eigen::Index>(mean.size()));
  const auto ev = j.at("eigenvalues").get<std::vector<double>>();
  t.eigenvalues = Eigen::Map<const Eigen::VectorXd>(ev.data(),
                                                    static_cast<Eigen::Index>(ev.size()));
  t.retained = j.at("retained").get<Eigen::Index>();
  const auto& rows = j.at("components");
  t.components.resize(static_cast<Eigen::Index>(rows.size()), t.mean.size());
  for (Eigen::Index r = 0; r < t.components.rows(); ++r) {
    const auto row = rows[static_cast<size_t>(r)].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != t.mean.size())
      throw ConfigError("pca components row width mismatch");
    t.components.row(r) =
        Eigen::Map<const Eigen::VectorXd>(row.data(),
                                          static_cast<Eigen::Index>(row.size()));
  }
  return t;
}

PcaTransform PcaTransform::from_json_string(const std::string& text) {
  return from_pca_json(nlohmann::json::parse(text));
}

}  // namespace ddspce

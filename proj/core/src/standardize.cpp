#include "ddspce/standardize.hpp"

#include <cmath>

#include "ddspce/errors.hpp"

namespace ddspce {

Eigen::MatrixXd AffineStandardization::apply(const Eigen::MatrixXd& x) const {
  if (x.cols() != shift.size())
    throw DimensionMismatchError("standardization width mismatch");
  return (x.rowwise() - shift.transpose()).array().rowwise() /
         scale.transpose().array();
}

Eigen::MatrixXd AffineStandardization::invert(const Eigen::MatrixXd& z) const {
  if (z.cols() != shift.size())
    throw DimensionMismatchError("standardization width mismatch");
  return (z.array().rowwise() * scale.transpose().array()).matrix().rowwise() +
         shift.transpose();
}

ColumnStandardization fit_column_standardization(const Eigen::VectorXd& column) {
  const Eigen::Index m = column.size();
  ColumnStandardization cs;
  cs.shift = column.mean();
  if (m > 1) {
    const double ss = (column.array() - cs.shift).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    cs.scale = sd > 0.0 ? sd : 1.0;
  }
  return cs;
}

std::pair<SampleMatrix, AffineStandardization> standardize(const SampleMatrix& s) {
  s.validate();
  AffineStandardization st;
  st.shift.resize(s.cols());
  st.scale.resize(s.cols());
  for (Eigen::Index c = 0; c < s.cols(); ++c) {
    const auto cs = fit_column_standardization(s.values.col(c));
    st.shift[c] = cs.shift;
    st.scale[c] = cs.scale;
  }
  SampleMatrix out;
  out.column_names = s.column_names;
  out.values = st.apply(s.values);
  return {std::move(out), std::move(st)};
}

}  // namespace ddspce

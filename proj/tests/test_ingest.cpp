#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ddspce/errors.hpp"
#include "ddspce/pca.hpp"
#include "ddspce/sample_matrix.hpp"
#include "ddspce/standardize.hpp"
#include "support/synth.hpp"

using namespace ddspce;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::path(DDSPCE_TEST_TMP) / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("load_samples reads a CSV with header") {
  const auto path = write_temp("basic.csv", "a,b\n1,2\n3,4\n");
  const SampleMatrix s = load_samples(path);
  CHECK(s.rows() == 2);
  CHECK(s.cols() == 2);
  CHECK(s.column_names == std::vector<std::string>{"a", "b"});
  CHECK(s.values(0, 0) == 1.0);
  CHECK(s.values(0, 1) == 2.0);
  CHECK(s.values(1, 0) == 3.0);
  CHECK(s.values(1, 1) == 4.0);
}

TEST_CASE("load_samples error paths") {
  CHECK_THROWS_AS(load_samples("/nonexistent/file.csv"), MissingFileError);
  const auto empty = write_temp("empty.csv", "a,b\n");
  CHECK_THROWS_AS(load_samples(empty), EmptyDataError);
  const auto bad = write_temp("bad.csv", "a\n1\nx\n");
  try {
    load_samples(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row == 2);
    CHECK(e.col == 1);
  }
}

TEST_CASE("sample CSV round trip preserves values exactly") {
  testsupport::Rng rng(11);
  SampleMatrix s;
  s.column_names = {"x", "y", "z"};
  s.values.resize(20, 3);
  for (int i = 0; i < 20; ++i)
    s.values.row(i) << rng.normal() * 1e-7, rng.normal() * 1e9, rng.uniform();
  const auto path = write_temp("roundtrip.csv", "");
  save_samples(s, path);
  const SampleMatrix r = load_samples(path);
  CHECK((r.values - s.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("standardize centers and scales with the n-1 convention") {
  SampleMatrix s;
  s.column_names = {"c"};
  s.values.resize(2, 1);
  s.values << 2.0, 4.0;
  const auto [z, st] = standardize(s);
  CHECK(st.shift[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(st.scale[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(z.values(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(z.values(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("standardize maps constant columns to zeros with scale 1") {
  SampleMatrix s;
  s.column_names = {"c"};
  s.values.resize(3, 1);
  s.values << 5.0, 5.0, 5.0;
  const auto [z, st] = standardize(s);
  CHECK(st.scale[0] == 1.0);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("standardize is idempotent up to round-off") {
  testsupport::Rng rng(3);
  SampleMatrix s;
  s.column_names = {"a", "b"};
  s.values.resize(200, 2);
  for (int i = 0; i < 200; ++i)
    s.values.row(i) << 3.0 + 2.0 * rng.normal(), rng.uniform();
  const auto [z1, st1] = standardize(s);
  const auto [z2, st2] = standardize(z1);
  CHECK((z2.values - z1.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(st2.shift.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((st2.scale.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("standardize apply/invert round trip") {
  testsupport::Rng rng(4);
  SampleMatrix s;
  s.column_names = {"a", "b", "c"};
  s.values.resize(50, 3);
  for (int i = 0; i < 50; ++i)
    s.values.row(i) << rng.normal() * 100.0, 7.0, rng.weibull(2.0, 9.0);
  const auto [z, st] = standardize(s);
  CHECK((st.invert(z.values) - s.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fit_pca requires two samples") {
  SampleMatrix s;
  s.column_names = {"a"};
  s.values.resize(1, 1);
  s.values << 1.0;
  CHECK_THROWS_AS(fit_pca(s), InsufficientSamplesError);
}

TEST_CASE("fit_pca on uncorrelated data keeps coordinate axes") {
  testsupport::Rng rng(5);
  SampleMatrix s;
  s.column_names = {"a", "b"};
  s.values.resize(4000, 2);
  for (int i = 0; i < 4000; ++i)
    s.values.row(i) << 5.0 * rng.normal(), 0.5 * rng.normal();
  const PcaTransform t = fit_pca(s);
  // Dominant direction is the first coordinate, sign fixed positive.
  CHECK(std::abs(t.components(0, 0)) > 0.999);
  CHECK(t.components(0, 0) > 0.0);
  CHECK(std::abs(t.components(1, 1)) > 0.999);
  CHECK(t.eigenvalues[0] > t.eigenvalues[1]);
}

TEST_CASE("fit_pca detects exact linear dependence") {
  testsupport::Rng rng(6);
  SampleMatrix s;
  s.column_names = {"x", "y"};
  s.values.resize(300, 2);
  for (int i = 0; i < 300; ++i) {
    const double x = rng.normal();
    s.values.row(i) << x, 2.0 * x;
  }
  const PcaTransform t = fit_pca(s);
  CHECK(std::abs(t.eigenvalues[1]) < 1e-10);
}

TEST_CASE("apply_pca decorrelates the training set") {
  testsupport::Rng rng(7);
  SampleMatrix s;
  s.column_names = {"a", "b", "c"};
  s.values.resize(500, 3);
  for (int i = 0; i < 500; ++i) {
    const double base = rng.normal();
    s.values.row(i) << base + 0.3 * rng.normal(), 2.0 * base + rng.normal(),
        rng.uniform();
  }
  const PcaTransform t = fit_pca(s);
  const SampleMatrix z = apply_pca(t, s);
  const Eigen::MatrixXd centered =
      z.values.rowwise() - z.values.colwise().mean();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(z.rows() - 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double corr = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
      CHECK(std::abs(corr) < 1e-8);
    }
}

TEST_CASE("apply_pca identity transform returns input") {
  PcaTransform t;
  t.mean = Eigen::VectorXd::Zero(2);
  t.components = Eigen::MatrixXd::Identity(2, 2);
  t.eigenvalues = Eigen::VectorXd::Ones(2);
  t.retained = 2;
  SampleMatrix s;
  s.column_names = {"a", "b"};
  s.values.resize(2, 2);
  s.values << 1.0, 2.0, 3.0, 4.0;
  const SampleMatrix z = apply_pca(t, s);
  CHECK((z.values - s.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pca round trip and truncated reconstruction error") {
  testsupport::Rng rng(8);
  SampleMatrix s;
  s.column_names = {"a", "b", "c", "d"};
  s.values.resize(400, 4);
  for (int i = 0; i < 400; ++i) {
    const double f = rng.normal();
    s.values.row(i) << f + 0.1 * rng.normal(), f - 0.1 * rng.normal(),
        0.5 * rng.normal(), 0.1 * rng.normal() + 3.0;
  }
  PcaTransform t = fit_pca(s);

  const SampleMatrix z = apply_pca(t, s);
  const SampleMatrix back = inverse_pca(t, z);
  CHECK((back.values - s.values).cwiseAbs().maxCoeff() < 1e-10);

  // Zero row maps back to the mean.
  SampleMatrix zero;
  zero.column_names = z.column_names;
  zero.values = Eigen::MatrixXd::Zero(1, 4);
  const SampleMatrix m = inverse_pca(t, zero);
  CHECK((m.values.row(0).transpose() - t.mean).cwiseAbs().maxCoeff() < 1e-12);

  // Dropping components loses exactly the energy in the dropped ones.
  PcaTransform trunc = t;
  trunc.retained = 2;
  const SampleMatrix z2 = apply_pca(trunc, s);
  const SampleMatrix back2 = inverse_pca(trunc, z2);
  const double err = (back2.values - s.values).squaredNorm();
  const double dropped_energy =
      (t.eigenvalues[2] + t.eigenvalues[3]) * static_cast<double>(s.rows() - 1);
  CHECK(err == doctest::Approx(dropped_energy).epsilon(1e-8));
}

TEST_CASE("pca dimension mismatches throw") {
  testsupport::Rng rng(9);
  SampleMatrix s;
  s.column_names = {"a", "b"};
  s.values.resize(10, 2);
  for (int i = 0; i < 10; ++i) s.values.row(i) << rng.normal(), rng.normal();
  const PcaTransform t = fit_pca(s);
  SampleMatrix wrong;
  wrong.column_names = {"a", "b", "c"};
  wrong.values = Eigen::MatrixXd::Zero(5, 3);
  CHECK_THROWS_AS(apply_pca(t, wrong), DimensionMismatchError);
  CHECK_THROWS_AS(inverse_pca(t, wrong), DimensionMismatchError);
}

TEST_CASE("pca permutation equivariance") {
  testsupport::Rng rng(10);
  SampleMatrix s;
  s.column_names = {"a", "b", "c"};
  s.values.resize(300, 3);
  for (int i = 0; i < 300; ++i) {
    const double f = rng.normal();
    s.values.row(i) << 2.0 * f + rng.normal(), rng.uniform(), f;
  }
  SampleMatrix p;  // columns permuted (c, a, b)
  p.column_names = {"c", "a", "b"};
  p.values.resize(300, 3);
  p.values.col(0) = s.values.col(2);
  p.values.col(1) = s.values.col(0);
  p.values.col(2) = s.values.col(1);

  const SampleMatrix z1 = apply_pca(fit_pca(s), s);
  const SampleMatrix z2 = apply_pca(fit_pca(p), p);
  // Same decorrelated coordinates regardless of input column order.
  CHECK((z1.values - z2.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pca transform JSON round trip is exact") {
  testsupport::Rng rng(12);
  SampleMatrix s;
  s.column_names = {"a", "b"};
  s.values.resize(40, 2);
  for (int i = 0; i < 40; ++i)
    s.values.row(i) << rng.normal() * 1e5, rng.normal() * 1e-6;
  const PcaTransform t = fit_pca(s);
  const PcaTransform r = PcaTransform::from_json_string(t.to_json_string());
  CHECK((r.mean - t.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.components - t.components).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.retained == t.retained);
}

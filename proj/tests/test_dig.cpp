#include <cmath>

#include "doctest.h"
#include "fig/dig.hpp"
#include "fig/errors.hpp"
#include "util.hpp"
#include "oracles.hpp"

using namespace fig;

namespace {

TimeSeries series_from(const Matrix& values) {
  TimeSeries X;
  X.values = values;
  return X;
}

// Eight 2-entry rows whose two disjoint length-4 windows each have exactly
// the identity covariance: deviations (+-1, +-1) around different means.
HistogramSet identity_cov_rows() {
  HistogramSet H;
  H.bins = 2;
  H.bounds = {{0.0, 1.0}};
  H.rows.resize(8, 2);
  H.rows << 4, 4, 4, 2, 2, 4, 2, 2, 11, 1, 11, -1, 9, 1, 9, -1;
  return H;
}

}  // namespace

TEST_CASE("single-sample windows give one-hot histograms") {
  Matrix v(4, 1);
  v << 0, 1, 2, 3;
  const HistogramSet H = local_histograms(series_from(v), WindowSpec{1}, 4);
  REQUIRE(H.rows.rows() == 4);
  REQUIRE(H.rows.cols() == 4);
  // padded bounds put value k in bin floor(4k/3), clamped: 0, 1, 2, 3
  CHECK((H.rows - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("wider windows spread mass over the contributing samples") {
  Matrix v(4, 1);
  v << 0, 1, 2, 3;
  const HistogramSet H = local_histograms(series_from(v), WindowSpec{3}, 4);
  Vector expected(4);
  expected << 0.5, 0.5, 0.0, 0.0;  // window at 0 covers samples {0, 1}
  CHECK((H.rows.row(0).transpose() - expected).cwiseAbs().maxCoeff() == 0.0);
  expected << 0.0, 0.0, 0.5, 0.5;  // window at 3 covers samples {2, 3}
  CHECK((H.rows.row(3).transpose() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("histogram rows match the direct recount and sum to one per block") {
  const Matrix X = testutil::random_normal(80, 3, 12);
  const HistogramSet H = local_histograms(series_from(X), WindowSpec{9}, 6);
  const Matrix ref = oracle::naive_histograms(X, 9, 6, H.bounds);
  CHECK((H.rows - ref).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 80; ++i)
    for (int c = 0; c < 3; ++c)
      CHECK(H.rows.row(i).segment(c * 6, 6).sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int c = 0; c < 3; ++c) {
    CHECK(H.bounds[c].first < X.col(c).minCoeff());
    CHECK(H.bounds[c].second > X.col(c).maxCoeff());
  }
}

TEST_CASE("a pair with itself is at distance zero") {
  const Matrix X = testutil::random_uniform(30, 2, 3);
  const HistogramSet H = local_histograms(series_from(X), WindowSpec{5}, 4);
  const DigModels C = build_dig_models(H, WindowSpec{6});
  CHECK(dig_pair_distance(7, 7, H, C) == 0.0);
}

TEST_CASE("identity covariances reduce the distance to scaled L2") {
  const HistogramSet H = identity_cov_rows();
  const DigModels C = build_dig_models(H, WindowSpec{4});
  const Matrix cov = dig_local_covariance(H, C, 2);
  const double ridge = 1e-10 * 2.0 / 2.0;  // trace-scaled
  CHECK((cov - (1.0 + ridge) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  const Vector z = (H.rows.row(2) - H.rows.row(6)).transpose();
  const double expected = z.norm() / std::sqrt(2.0 * (1.0 + ridge));
  CHECK(dig_pair_distance(2, 6, H, C) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("well-conditioned sums agree with the dense inverse") {
  HistogramSet H;
  H.bins = 5;
  H.bounds = {{0.0, 1.0}};
  H.rows = testutil::random_normal(30, 5, 77);
  const DigModels C = build_dig_models(H, WindowSpec{21});
  const Matrix A = dig_local_covariance(H, C, 10) + dig_local_covariance(H, C, 20);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  REQUIRE(es.eigenvalues().minCoeff() > 0.0);
  REQUIRE(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 1e6);
  const Vector z = (H.rows.row(10) - H.rows.row(20)).transpose();
  const double direct = std::sqrt(z.dot(A.inverse() * z));
  CHECK(dig_pair_distance(10, 20, H, C) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("pair distances match the SVD pseudo-inverse reference") {
  const Matrix X = testutil::random_normal(60, 2, 5);
  const HistogramSet H = local_histograms(series_from(X), WindowSpec{5}, 5);
  const DigModels C = build_dig_models(H, WindowSpec{20});
  for (auto [t, s] : {std::pair{0, 30}, {3, 12}, {25, 59}, {40, 41}}) {
    const double lib = dig_pair_distance(t, s, H, C);
    const double ref = oracle::naive_dig_pair(t, s, H, 20);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("matrix assembly agrees with per-pair distances on the narrow-window route") {
  // bins * d = 120 and window 10: assembled through the compact Gram path
  const Matrix X = testutil::random_normal(50, 6, 31);
  const HistogramSet H = local_histograms(series_from(X), WindowSpec{5}, 20);
  const DigModels C = build_dig_models(H, WindowSpec{10});
  const DistanceMatrix D = dig_distance_matrix_from_histograms(H, WindowSpec{10});
  CHECK(D.method == Method::Dig);
  double max_diff = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = i + 1; j < 50; ++j)
      max_diff = std::max(max_diff, std::abs(D.D(i, j) - dig_pair_distance(i, j, H, C)));
  CHECK(max_diff < 1e-8);
  for (auto [t, s] : {std::pair{0, 25}, {11, 44}})
    CHECK(D.D(t, s) == doctest::Approx(oracle::naive_dig_pair(t, s, H, 10)).epsilon(1e-8));
}

TEST_CASE("matrix assembly agrees with per-pair distances on the wide-window route") {
  const Matrix X = testutil::random_normal(40, 2, 8);
  const HistogramSet H = local_histograms(series_from(X), WindowSpec{5}, 5);  // M = 10 < 2 * 20
  const DigModels C = build_dig_models(H, WindowSpec{20});
  const DistanceMatrix D = dig_distance_matrix_from_histograms(H, WindowSpec{20});
  double max_diff = 0.0;
  for (int i = 0; i < 40; ++i)
    for (int j = i + 1; j < 40; ++j)
      max_diff = std::max(max_diff, std::abs(D.D(i, j) - dig_pair_distance(i, j, H, C)));
  CHECK(max_diff < 1e-8);
}

TEST_CASE("distance matrix invariants and determinism") {
  TimeSeries X;
  X.values = testutil::random_normal(60, 2, 19);
  DigConfig cfg;
  cfg.bins = 5;
  cfg.l1 = WindowSpec{5};
  cfg.l2 = WindowSpec{10};
  const DistanceMatrix a = dig_distance_matrix(X, cfg);
  const DistanceMatrix b = dig_distance_matrix(X, cfg);
  CHECK((a.D - a.D.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.D.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.D.minCoeff() >= 0.0);
  CHECK((a.D - b.D).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a constant series is at distance zero everywhere") {
  TimeSeries X;
  X.values = Matrix::Constant(20, 2, 3.0);
  DigConfig cfg;
  cfg.bins = 4;
  cfg.l1 = WindowSpec{3};
  cfg.l2 = WindowSpec{5};
  const DistanceMatrix D = dig_distance_matrix(X, cfg);
  CHECK(D.D.cwiseAbs().maxCoeff() == 0.0);
  CHECK(D.D.allFinite());
}

TEST_CASE("stride reduces the matrix to segment centers") {
  TimeSeries X;
  X.values = testutil::random_normal(45, 2, 40);
  DigConfig cfg;
  cfg.bins = 4;
  cfg.l1 = WindowSpec{5};
  cfg.l2 = WindowSpec{6};
  cfg.stride = 9;
  const DistanceMatrix D = dig_distance_matrix(X, cfg);
  CHECK(D.size() == 5);
}

TEST_CASE("invalid inputs are rejected") {
  TimeSeries X;
  X.values = Matrix::Zero(1, 2);
  CHECK_THROWS_AS(dig_distance_matrix(X, DigConfig{}), InvalidData);
  X.values = testutil::random_normal(20, 2, 1);
  DigConfig cfg;
  cfg.bins = 1;
  CHECK_THROWS_AS(dig_distance_matrix(X, cfg), InvalidConfig);
}

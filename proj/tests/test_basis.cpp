#include <cmath>

#include "doctest.h"
#include "fig/basis.hpp"
#include "fig/errors.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace fig;

TEST_CASE("scalar Fourier values at reference points") {
  const double s2 = std::sqrt(2.0);
  Vector v = eval_scalar_fourier(0.0, 7);
  const double expect0[] = {1.0, s2, 0.0, s2, 0.0, s2, 0.0};
  for (int m = 0; m < 7; ++m) CHECK(v(m) == doctest::Approx(expect0[m]).epsilon(1e-12));

  v = eval_scalar_fourier(0.25, 7);
  const double expect25[] = {1.0, 0.0, s2, -s2, 0.0, 0.0, -s2};
  for (int m = 0; m < 7; ++m) CHECK(v(m) == doctest::Approx(expect25[m]).epsilon(1e-12));
}

TEST_CASE("out-of-domain arguments clamp to the boundary") {
  CHECK((eval_scalar_fourier(-0.5, 7) - eval_scalar_fourier(0.0, 7)).norm() == 0.0);
  CHECK((eval_scalar_fourier(1.5, 7) - eval_scalar_fourier(1.0, 7)).norm() == 0.0);
}

TEST_CASE("truncated family is orthonormal on [0,1]") {
  const int B = 15;
  for (int a = 1; a <= B; ++a)
    for (int b = a; b <= B; ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      CHECK(oracle::fourier_inner(a, b) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("gram matrix of the Fourier family is the identity") {
  BasisSpec spec = fit_domain(testutil::random_uniform(20, 3, 7), 5);
  const GramMatrix W = gram(spec);
  CHECK(W.is_identity);
  CHECK(W.W.rows() == spec.feature_count());
  CHECK((W.W - Matrix::Identity(15, 15)).norm() == 0.0);
}

TEST_CASE("explicit gram matrices expose W^{-1/2}") {
  Matrix w(2, 2);
  w << 4.0, 1.0, 1.0, 3.0;
  const GramMatrix g = GramMatrix::FromMatrix(w);
  CHECK_FALSE(g.is_identity);
  CHECK((g.inv_sqrt * w * g.inv_sqrt - Matrix::Identity(2, 2)).norm() < 1e-10);

  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(GramMatrix::FromMatrix(bad), InvalidConfig);
}

TEST_CASE("domain fitting pads the observed range") {
  const Matrix X = testutil::random_uniform(50, 2, 3, -2.0, 5.0);
  const BasisSpec spec = fit_domain(X, 7);
  REQUIRE(spec.domain_bounds.size() == 2);
  for (int c = 0; c < 2; ++c) {
    const double lo = X.col(c).minCoeff(), hi = X.col(c).maxCoeff();
    const double pad = 1e-9 * (hi - lo + 1.0);
    CHECK(spec.domain_bounds[c].first == doctest::Approx(lo - pad).epsilon(1e-14));
    CHECK(spec.domain_bounds[c].second == doctest::Approx(hi + pad).epsilon(1e-14));
    CHECK(spec.domain_bounds[c].first < lo);
    CHECK(spec.domain_bounds[c].second > hi);
  }
}

TEST_CASE("a constant column gets a unit-width domain") {
  Matrix X(4, 1);
  X << 2.5, 2.5, 2.5, 2.5;
  const BasisSpec spec = fit_domain(X, 3);
  CHECK(spec.domain_bounds[0].first == 2.0);
  CHECK(spec.domain_bounds[0].second == 3.0);
}

TEST_CASE("multivariate evaluation concatenates per-dimension blocks") {
  BasisSpec spec;
  spec.per_dim_count = 3;
  spec.data_dim = 2;
  spec.domain_bounds = {{0.0, 1.0}, {-1.0, 1.0}};
  spec.validate();
  Eigen::RowVectorXd x(2);
  x << 0.5, 0.0;  // both rescale to u = 0.5
  const Vector out = eval_basis(x, spec);
  const Vector block = eval_scalar_fourier(0.5, 3);
  REQUIRE(out.size() == 6);
  CHECK((out.head(3) - block).norm() < 1e-12);
  CHECK((out.tail(3) - block).norm() < 1e-12);
}

TEST_CASE("malformed specs are rejected") {
  BasisSpec spec;
  spec.per_dim_count = 0;
  spec.data_dim = 1;
  spec.domain_bounds = {{0.0, 1.0}};
  CHECK_THROWS_AS(spec.validate(), InvalidConfig);

  spec.per_dim_count = 3;
  spec.data_dim = 2;  // bounds size mismatch
  CHECK_THROWS_AS(spec.validate(), InvalidConfig);

  spec.data_dim = 1;
  spec.domain_bounds = {{1.0, 1.0}};  // lo must be < hi
  CHECK_THROWS_AS(spec.validate(), InvalidConfig);
}

TEST_CASE("domain fitting rejects degenerate input") {
  CHECK_THROWS_AS(fit_domain(Matrix::Zero(1, 2), 7), InvalidData);
  Matrix bad = Matrix::Zero(3, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_domain(bad, 7), InvalidData);
}

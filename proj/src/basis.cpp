#include "fig/basis.hpp"

#include <cmath>
#include <numbers>

namespace fig {

void BasisSpec::validate() const {
  if (per_dim_count < 1) throw InvalidConfig("basis per_dim_count must be >= 1");
  if (data_dim < 1) throw InvalidConfig("basis data_dim must be >= 1");
  if (static_cast<int>(domain_bounds.size()) != data_dim)
    throw InvalidConfig("basis domain_bounds must have one pair per dimension");
  for (const auto& [lo, hi] : domain_bounds)
    if (!(lo < hi)) throw InvalidConfig("basis domain bounds require lo < hi");
}

GramMatrix GramMatrix::Identity(int m) {
  GramMatrix g;
  g.W = Matrix::Identity(m, m);
  g.is_identity = true;
  return g;
}

GramMatrix GramMatrix::FromMatrix(const Matrix& w) {
  if (w.rows() != w.cols()) throw InvalidConfig("gram matrix must be square");
  if (!w.isApprox(w.transpose(), 1e-10)) throw InvalidConfig("gram matrix must be symmetric");
  GramMatrix g;
  g.W = 0.5 * (w + w.transpose());
  if (g.W.isIdentity(1e-14)) {
    g.is_identity = true;
    return g;
  }
  g.is_identity = false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.W);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw InvalidConfig("gram matrix must be positive-definite");
  g.inv_sqrt = es.eigenvectors() *
               es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
               es.eigenvectors().transpose();
  return g;
}

BasisSpec fit_domain(const Matrix& X, int per_dim_count) {
  if (X.rows() < 2) throw InvalidData("fit_domain needs at least 2 samples");
  if (!X.allFinite()) throw InvalidData("fit_domain: input contains non-finite values");
  BasisSpec spec;
  spec.per_dim_count = per_dim_count;
  spec.data_dim = static_cast<int>(X.cols());
  spec.domain_bounds.reserve(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double lo = X.col(j).minCoeff();
    const double hi = X.col(j).maxCoeff();
    if (lo == hi) {
      spec.domain_bounds.emplace_back(lo - 0.5, hi + 0.5);
    } else {
      const double pad = 1e-9 * (hi - lo + 1.0);
      spec.domain_bounds.emplace_back(lo - pad, hi + pad);
    }
  }
  spec.validate();
  return spec;
}

void eval_scalar_fourier(double u, int B, double* out) {
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  out[0] = 1.0;
  constexpr double root2 = std::numbers::sqrt2;
  const double w = 2.0 * std::numbers::pi * u;
  for (int k = 1; 2 * k - 1 < B; ++k) {
    const double c = std::cos(k * w);
    const double s = std::sin(k * w);
    out[2 * k - 1] = root2 * c;
    if (2 * k < B) out[2 * k] = root2 * s;
  }
}

Vector eval_scalar_fourier(double u, int B) {
  Vector v(B);
  eval_scalar_fourier(u, B, v.data());
  return v;
}

void eval_basis(const Eigen::Ref<const Eigen::RowVectorXd>& x, const BasisSpec& spec, double* out) {
  if (x.size() != spec.data_dim)
    throw InvalidData("eval_basis: point dimension does not match basis spec");
  const int B = spec.per_dim_count;
  for (int j = 0; j < spec.data_dim; ++j) {
    const auto& [lo, hi] = spec.domain_bounds[j];
    const double u = (x[j] - lo) / (hi - lo);
    eval_scalar_fourier(u, B, out + static_cast<std::ptrdiff_t>(j) * B);
  }
}

Vector eval_basis(const Eigen::Ref<const Eigen::RowVectorXd>& x, const BasisSpec& spec) {
  Vector v(spec.feature_count());
  eval_basis(x, spec, v.data());
  return v;
}

GramMatrix gram(const BasisSpec& spec) {
  spec.validate();
  return GramMatrix::Identity(spec.feature_count());
}

}  // namespace fig

#include "fig/fpca.hpp"

#include <cmath>
#include <cstdio>

#include "fig/threading.hpp"

namespace fig {

const char* to_string(ScoreNormalization mode) {
  return mode == ScoreNormalization::Exp ? "exp" : "inv_sqrt";
}

ScoreNormalization score_normalization_from_string(const std::string& s) {
  if (s == "exp") return ScoreNormalization::Exp;
  if (s == "inv_sqrt") return ScoreNormalization::InvSqrt;
  throw InvalidConfig("unknown normalization '" + s + "' (expected exp|inv_sqrt)");
}

Vector local_mean(const FeatureMatrix& F, int i, WindowSpec l2) {
  const int n = static_cast<int>(F.rows.rows());
  const IndexRange r = window_indices(i, n, l2.length);
  return F.rows.middleRows(r.begin, r.size()).colwise().mean().transpose();
}

Matrix local_covariance(const FeatureMatrix& F, int i, WindowSpec l2) {
  const int n = static_cast<int>(F.rows.rows());
  const int M = static_cast<int>(F.rows.cols());
  const IndexRange r = window_indices(i, n, l2.length);
  const auto block = F.rows.middleRows(r.begin, r.size());
  const double w = static_cast<double>(r.size());

  const Vector mu = block.colwise().mean().transpose();
  Matrix cov = block.transpose() * block / w - mu * mu.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  const double ridge = 1e-10 * std::max(cov.trace(), 0.0) / static_cast<double>(M);
  cov.diagonal().array() += ridge;
  return cov;
}

namespace {

// Sign convention: first component with magnitude above 1e-12 is positive.
void fix_eigvec_signs(Matrix& vecs) {
  for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      const double v = vecs(i, k);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) vecs.col(k) = -vecs.col(k);
        break;
      }
    }
  }
}

}  // namespace

void eigendecompose(const Matrix& cov, const GramMatrix& W, int K,
                    Vector* eigvals, Matrix* eigvecs) {
  const int M = static_cast<int>(cov.rows());
  if (K > M) throw InvalidConfig("eigendecompose: K exceeds the feature count M");
  if (K < 1) throw InvalidConfig("eigendecompose: K must be >= 1");

  Matrix target;
  if (W.is_identity) {
    target = 0.5 * (cov + cov.transpose());
  } else {
    target = W.inv_sqrt * cov * W.inv_sqrt;
    target = 0.5 * (target + target.transpose()).eval();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(target);
  if (es.info() != Eigen::Success) throw Error("eigendecompose: solver failed");

  // Eigen returns ascending order; flip to descending.
  eigvals->resize(K);
  eigvecs->resize(M, K);
  for (int k = 0; k < K; ++k) {
    double lam = es.eigenvalues()(M - 1 - k);
    if (lam < 0.0 && lam > -1e-8) lam = 0.0;
    (*eigvals)(k) = lam;
    eigvecs->col(k) = es.eigenvectors().col(M - 1 - k);
  }
  fix_eigvec_signs(*eigvecs);
}

LocalModel build_local_model(const FeatureMatrix& F, int i, WindowSpec l2, const GramMatrix& W,
                             int K, ScoreNormalization mode) {
  const int M = static_cast<int>(F.rows.cols());
  if (K <= 0) K = M;
  LocalModel m;
  m.index = i;
  m.mean = local_mean(F, i, l2);
  m.cov = local_covariance(F, i, l2);
  eigendecompose(m.cov, W, K, &m.eigvals, &m.eigvecs);
  m.K = K;
  m.normalization = mode;
  return m;
}

std::vector<LocalModel> build_local_models(const FeatureMatrix& F, WindowSpec l2,
                                           const GramMatrix& W, int K, ScoreNormalization mode) {
  const int n = static_cast<int>(F.rows.rows());
  std::vector<LocalModel> models(n);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      models[i] = build_local_model(F, static_cast<int>(i), l2, W, K, mode);
  });
  return models;
}

double pc_score(const Eigen::Ref<const Vector>& a_j, const LocalModel& model,
                const GramMatrix& W, int k) {
  if (k < 0 || k >= model.K) throw InvalidConfig("pc_score: component index out of range");
  const Vector centered = a_j - model.mean;
  if (W.is_identity) return centered.dot(model.eigvecs.col(k));
  return centered.dot(W.inv_sqrt * model.eigvecs.col(k));
}

double normalize_score(double s, double lambda, ScoreNormalization mode, ScoreDiagnostics* diag) {
  if (mode == ScoreNormalization::Exp) return s / std::exp(lambda);
  if (lambda <= kEigvalFloor) {
    if (diag) ++diag->skipped;
    return 0.0;
  }
  return s / std::sqrt(lambda);
}

Vector score_weights(const Vector& eigvals, ScoreNormalization mode, ScoreDiagnostics* diag) {
  Vector g(eigvals.size());
  for (Eigen::Index k = 0; k < eigvals.size(); ++k) {
    if (mode == ScoreNormalization::Exp) {
      g(k) = 1.0 / std::exp(eigvals(k));
    } else if (eigvals(k) <= kEigvalFloor) {
      if (diag) ++diag->skipped;
      g(k) = 0.0;
    } else {
      g(k) = 1.0 / std::sqrt(eigvals(k));
    }
  }
  return g;
}

namespace {

// Inverse quadratic form x^T C^{-1} x through the eigendecomposition;
// eigenvalues below 1e-12 * lambda_max are treated as null directions.
double inverse_quadratic_form(const Matrix& cov, const Vector& x, bool* used_pinv) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (cov + cov.transpose()));
  const Vector& lam = es.eigenvalues();
  const double lam_max = lam.cwiseAbs().maxCoeff();
  const double cutoff = 1e-12 * std::max(lam_max, 1e-300);
  double q = 0.0;
  bool dropped = false;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (lam(k) <= cutoff) {
      dropped = true;
      continue;
    }
    const double proj = es.eigenvectors().col(k).dot(x);
    q += proj * proj / lam(k);
  }
  if (dropped && used_pinv) *used_pinv = true;
  return q;
}

}  // namespace

double vector_mahalanobis_direct(const Vector& u, const Vector& v,
                                 const Matrix& cov_u, const Matrix& cov_v) {
  const Vector diff = u - v;
  bool used_pinv = false;
  const double q = inverse_quadratic_form(cov_u, diff, &used_pinv) +
                   inverse_quadratic_form(cov_v, diff, &used_pinv);
  if (used_pinv)
    std::fprintf(stderr, "fig: warning: singular covariance, using pseudo-inverse\n");
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace fig

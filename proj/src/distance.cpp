#include "fig/distance.hpp"

#include <cmath>

#include "fig/threading.hpp"

namespace fig {

double fig_pair_distance(int i, int j, const std::vector<LocalModel>& models,
                         const FeatureMatrix& F, const GramMatrix& W) {
  const LocalModel& mi = models.at(i);
  const LocalModel& mj = models.at(j);
  if (mi.K != mj.K || mi.normalization != mj.normalization)
    throw InvalidConfig("fig_pair_distance: models built with different K or normalization");

  double total = 0.0;
  for (int k = 0; k < mi.K; ++k) {
    const double s_ii = pc_score(F.rows.row(i).transpose(), mi, W, k);
    const double s_ij = pc_score(F.rows.row(j).transpose(), mi, W, k);
    const double d = normalize_score(s_ii, mi.eigvals(k), mi.normalization) -
                     normalize_score(s_ij, mi.eigvals(k), mi.normalization);
    total += d * d;
  }
  for (int k = 0; k < mj.K; ++k) {
    const double s_ji = pc_score(F.rows.row(i).transpose(), mj, W, k);
    const double s_jj = pc_score(F.rows.row(j).transpose(), mj, W, k);
    const double d = normalize_score(s_ji, mj.eigvals(k), mj.normalization) -
                     normalize_score(s_jj, mj.eigvals(k), mj.normalization);
    total += d * d;
  }
  return std::sqrt(total);
}

DistanceMatrix fig_distance_matrix_from_features(const FeatureMatrix& F, const GramMatrix& W,
                                                 const FigConfig& cfg) {
  const int n = static_cast<int>(F.rows.rows());
  const int M = static_cast<int>(F.rows.cols());
  if (n < 2) throw InvalidData("fig_distance_matrix: need at least 2 rows");
  const int K = cfg.K <= 0 ? M : cfg.K;
  if (K > M) throw InvalidConfig("fig_distance_matrix: K exceeds feature count M");

  // One-sided squared terms t1[i][j] = || G_i U_i^T W^{-1/2} (a_i - a_j) ||^2.
  // Row i only needs model i, so models are built and dropped per row; the
  // pair distance is sqrt(t1[i][j] + t1[j][i]).
  Matrix t1(n, n);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    Vector eigvals;
    Matrix eigvecs;
    for (std::int64_t i = begin; i < end; ++i) {
      const Matrix cov = local_covariance(F, static_cast<int>(i), cfg.l2);
      eigendecompose(cov, W, K, &eigvals, &eigvecs);
      const Vector g = score_weights(eigvals, cfg.normalization);
      // projector rows: g_k * (W^{-1/2} u_k)^T
      Matrix proj = eigvecs;  // M x K
      if (!W.is_identity) proj = W.inv_sqrt * proj;
      proj = proj * g.asDiagonal();
      const Matrix scores = F.rows * proj;  // n x K, row j = projected a_j
      t1.row(i) = (scores.rowwise() - scores.row(i)).rowwise().squaredNorm().transpose();
    }
  });

  DistanceMatrix out;
  out.method = Method::Fig;
  out.D.resize(n, n);
  out.D.diagonal().setZero();
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      for (std::int64_t j = i + 1; j < n; ++j) {
        const double d = std::sqrt(t1(i, j) + t1(j, i));
        out.D(i, j) = d;
        out.D(j, i) = d;
      }
  });
  return out;
}

DistanceMatrix fig_distance_matrix(const TimeSeries& X, const FigConfig& cfg) {
  if (X.size() < 2) throw InvalidData("fig_distance_matrix: need at least 2 samples");
  const BasisSpec spec = fit_domain(X.values, cfg.basis_count);
  FeatureMatrix F = compute_features(X, spec, cfg.l1);
  if (cfg.stride > 1) F = stride_subsample(F, cfg.stride);
  const GramMatrix W = gram(spec);
  return fig_distance_matrix_from_features(F, W, cfg);
}

DistanceMatrix euclidean_distance_matrix(const Matrix& X) {
  const int n = static_cast<int>(X.rows());
  DistanceMatrix out;
  out.method = Method::Euclidean;
  out.D.resize(n, n);
  out.D.diagonal().setZero();
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      for (std::int64_t j = i + 1; j < n; ++j) {
        const double d = (X.row(i) - X.row(j)).norm();
        out.D(i, j) = d;
        out.D(j, i) = d;
      }
  });
  return out;
}

}  // namespace fig

#pragma once

#include <string>
#include <vector>

#include "fig/fpca.hpp"
#include "fig/types.hpp"

namespace fig {

// Stage parameters of the functional-geometry distance pipeline.
struct FigConfig {
  int basis_count = 7;    // B, per dimension
  WindowSpec l1{10};      // feature-averaging window over samples
  WindowSpec l2{10};      // covariance window over feature rows
  int stride = 1;         // feature-row subsampling (segment centers)
  int K = 0;              // components kept, 0 = all (M)
  ScoreNormalization normalization = ScoreNormalization::Exp;
};

// Two-sided functional Mahalanobis distance between indices i and j from
// their local models: the root of
// sum_k (w_iik - w_ijk)^2 + sum_k (w_jik - w_jjk)^2.
// Models must share K and normalization mode (InvalidConfig otherwise).
double fig_pair_distance(int i, int j, const std::vector<LocalModel>& models,
                         const FeatureMatrix& F, const GramMatrix& W);

// Full pipeline: fit domain -> features -> stride -> local models ->
// normalized scores -> pairwise assembly (upper triangle, mirrored).
DistanceMatrix fig_distance_matrix(const TimeSeries& X, const FigConfig& cfg);

// Same from precomputed feature rows (window sweeps reuse the feature stage).
DistanceMatrix fig_distance_matrix_from_features(const FeatureMatrix& F, const GramMatrix& W,
                                                 const FigConfig& cfg);

// Plain pairwise L2 distances between rows.
DistanceMatrix euclidean_distance_matrix(const Matrix& X);

}  // namespace fig

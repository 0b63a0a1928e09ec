#pragma once

#include <cstdint>
#include <vector>

#include "fig/basis.hpp"
#include "fig/features.hpp"
#include "fig/types.hpp"

namespace fig {

// How principal-component scores are rescaled by their eigenvalue.
// Exp (s / e^lambda) is the stable default; InvSqrt (s / sqrt(lambda)) is
// the classical whitening kept for cross-checks against the direct
// Mahalanobis form.
enum class ScoreNormalization { Exp, InvSqrt };

const char* to_string(ScoreNormalization mode);
ScoreNormalization score_normalization_from_string(const std::string& s);

// Floor below which an eigenvalue cannot be used by InvSqrt whitening;
// such components are skipped and tallied.
inline constexpr double kEigvalFloor = 1e-12;

// Counts of components dropped by the InvSqrt eigenvalue floor.
struct ScoreDiagnostics {
  std::int64_t skipped = 0;
};

// Local second-order summary of the feature rows around one index: mean,
// covariance, and its truncated eigen-pairs in the W-metric.
struct LocalModel {
  int index = 0;
  Vector mean;     // M
  Matrix cov;      // M x M, symmetrized and ridge-stabilized
  Vector eigvals;  // K, descending, clamped to >= 0
  Matrix eigvecs;  // M x K, orthonormal columns, first nonzero entry positive
  int K = 0;
  ScoreNormalization normalization = ScoreNormalization::Exp;
};

// Mean of feature rows over the covariance window at i.
Vector local_mean(const FeatureMatrix& F, int i, WindowSpec l2);

// Population covariance of the windowed feature rows, symmetrized and
// stabilized with ridge 1e-10 * trace / M.
Matrix local_covariance(const FeatureMatrix& F, int i, WindowSpec l2);

// Top-K eigen-pairs of W^{-1/2} cov W^{-1/2}, descending; eigenvalues in
// [-1e-8, 0) are clamped to zero; eigenvector signs are fixed so the first
// nonzero component is positive. K > M throws InvalidConfig.
void eigendecompose(const Matrix& cov, const GramMatrix& W, int K,
                    Vector* eigvals, Matrix* eigvecs);

LocalModel build_local_model(const FeatureMatrix& F, int i, WindowSpec l2, const GramMatrix& W,
                             int K, ScoreNormalization mode = ScoreNormalization::Exp);

std::vector<LocalModel> build_local_models(const FeatureMatrix& F, WindowSpec l2,
                                           const GramMatrix& W, int K,
                                           ScoreNormalization mode = ScoreNormalization::Exp);

// Principal-component score of feature row a_j in model i:
// s = (a_j - mean_i)^T W^{-1/2} u_ik.
double pc_score(const Eigen::Ref<const Vector>& a_j, const LocalModel& model,
                const GramMatrix& W, int k);

// s / e^lambda (Exp) or s / sqrt(lambda) (InvSqrt). InvSqrt with lambda at
// or below the floor contributes 0 and bumps the diagnostics tally.
double normalize_score(double s, double lambda, ScoreNormalization mode,
                       ScoreDiagnostics* diag = nullptr);

// Per-eigenvalue score multipliers g_k (score * g_k = normalized score),
// with floored InvSqrt components mapped to 0.
Vector score_weights(const Vector& eigvals, ScoreNormalization mode,
                     ScoreDiagnostics* diag = nullptr);

// Two-sided vector Mahalanobis distance
// sqrt((u-v)^T (Cu^{-1} + Cv^{-1}) (u-v)); a singular covariance falls back
// to its pseudo-inverse with a warning on stderr.
double vector_mahalanobis_direct(const Vector& u, const Vector& v,
                                 const Matrix& cov_u, const Matrix& cov_v);

}  // namespace fig

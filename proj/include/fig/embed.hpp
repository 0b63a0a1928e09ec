#pragma once

#include <vector>

#include "fig/types.hpp"

namespace fig {

// Affinity kernel with adaptive per-point bandwidth: eps_i is the distance
// from i to its knn-th nearest neighbor, entries decay as
// exp(-(d/eps_i)^alpha), and the result is symmetrized.
struct AffinityGraph {
  Matrix Kmat;
  int knn = 5;
  double alpha = 40.0;
};

// Row-stochastic Markov operator over the affinity graph. `degree` keeps the
// kernel row sums so the operator can be symmetrized later (the conjugate
// matrix sqrt(deg_i) P_ij / sqrt(deg_j) shares its spectrum).
struct DiffusionOperator {
  Matrix P;
  Vector degree;
  int t = 1;
};

struct EmbedConfig {
  int knn = 5;
  double alpha = 40.0;
  int t_override = 0;  // 0 = pick the diffusion time by the entropy knee
  int t_max = 100;
  int r = 2;
  int smacof_max_iter = 500;
  double smacof_tol = 1e-6;
};

struct Embedding {
  Matrix Y;  // n x r
  std::vector<double> stress_history;
  int r = 2;
  Metadata metadata;
};

AffinityGraph alpha_decay_kernel(const DistanceMatrix& D, int k, double alpha);

// Throws DisconnectedPoint naming the first index whose kernel row sums to 0.
DiffusionOperator row_normalize(const AffinityGraph& K);

// Von Neumann entropy of the diffused spectrum: H(t) of the normalized
// |eigenvalue|^t distribution of the symmetrized operator, for t = 1..t_max.
Vector diffusion_entropy_curve(const DiffusionOperator& P, int t_max);

// Knee of an entropy curve: the 1-based t whose point lies farthest from the
// chord between the first and last curve points; ties pick the smallest t.
int entropy_knee(const Vector& H);

int select_diffusion_time(const DiffusionOperator& P, int t_max);

Matrix matrix_power(const Matrix& P, int t);

// Euclidean distances between rows of -log(P^t + 1e-7).
DistanceMatrix potential_distances(const DiffusionOperator& P, int t);

// Torgerson initialization: double-center -1/2 D.^2, take the top-r
// eigenpairs (negative eigenvalues clamped to zero), deterministic signs.
Matrix classical_mds(const DistanceMatrix& D, int r);

// Stress-majorizing metric MDS (Guttman transform); stress_history starts at
// the stress of `init` and is non-increasing.
Embedding smacof_mds(const DistanceMatrix& D, int r, const Matrix& init, int max_iter = 500,
                     double tol = 1e-6);

// Kernel -> diffusion operator -> time selection -> potential distances ->
// classical MDS init -> SMACOF, with every stage parameter recorded in the
// embedding metadata.
Embedding embed(const DistanceMatrix& D, const EmbedConfig& cfg);

}  // namespace fig

#pragma once

#include <utility>
#include <vector>

#include "fig/types.hpp"

namespace fig {

enum class BasisFamily { Fourier };

// Orthonormal basis evaluated per dimension on data rescaled to [0,1].
// The multivariate basis is the concatenation of the B per-dimension
// blocks, so the total feature count is M = B * d.
struct BasisSpec {
  BasisFamily family = BasisFamily::Fourier;
  int per_dim_count = 7;  // B
  int data_dim = 0;       // d
  std::vector<std::pair<double, double>> domain_bounds;  // one (lo, hi) per dimension

  int feature_count() const { return per_dim_count * data_dim; }  // M
  void validate() const;  // throws InvalidConfig on a malformed spec
};

// W = integral of phi(x) phi(x)^T over the domain. For the Fourier family
// this is the identity; `inv_sqrt` stays empty in that case.
struct GramMatrix {
  Matrix W;
  bool is_identity = true;
  Matrix inv_sqrt;  // W^{-1/2}, only populated for non-identity W

  static GramMatrix Identity(int m);
  // Builds from an explicit SPD matrix (test path); throws InvalidConfig
  // if W is not symmetric positive-definite.
  static GramMatrix FromMatrix(const Matrix& w);
};

// Learns per-dimension domain bounds from data: (min - pad, max + pad) with
// pad = 1e-9 * (max - min + 1); a constant column v gets (v - 0.5, v + 0.5).
BasisSpec fit_domain(const Matrix& X, int per_dim_count = 7);

// Scalar Fourier basis on [0,1], truncated to B entries:
// phi_1 = 1, phi_2k = sqrt(2) cos(2 pi k u), phi_2k+1 = sqrt(2) sin(2 pi k u).
// u outside [0,1] is clamped.
void eval_scalar_fourier(double u, int B, double* out);
Vector eval_scalar_fourier(double u, int B);

// Rescales each coordinate of x to [0,1] using the fitted bounds and
// concatenates the per-dimension blocks into one M-vector.
void eval_basis(const Eigen::Ref<const Eigen::RowVectorXd>& x, const BasisSpec& spec, double* out);
Vector eval_basis(const Eigen::Ref<const Eigen::RowVectorXd>& x, const BasisSpec& spec);

// The Gram matrix of the basis; identity for the Fourier family.
GramMatrix gram(const BasisSpec& spec);

}  // namespace fig

#pragma once

#include "multimp/rng.hpp"
#include "multimp/types.hpp"

namespace multimp {

/// Pivot threshold below which a Cholesky factorization is declared not
/// positive definite.
inline constexpr double kCholeskyPivotTol = 1e-12;

bool is_symmetric(const Eigen::Ref<const Matrix>& a, double tol = 1e-12);

/// Lower-triangular L with L L^T = a. Throws NotPositiveDefinite when any
/// pivot falls at or below kCholeskyPivotTol, which signals that the input
/// needs repair.
Matrix cholesky_lower(const Eigen::Ref<const Matrix>& a);

/// Repair a symmetric unit-diagonal matrix into a positive definite
/// correlation matrix: clip eigenvalues from below, reassemble, rescale to
/// unit diagonal, and iterate until the minimum eigenvalue is at least
/// `floor`. Inputs that already satisfy that are returned unchanged, which
/// makes the repair idempotent.
Matrix nearest_pd_repair(const Eigen::Ref<const Matrix>& a, double floor = 1e-4);

/// n i.i.d. rows from N(0, corr). corr must pass cholesky_lower.
Matrix sample_mvn(const Eigen::Ref<const Matrix>& corr, Index n, RngStream& rng);

struct OlsFit {
  Vector coefficients;         // intercept first
  double residual_variance = 0.0;
  Matrix xtx_inverse;          // inverse of the (ridged) cross-product matrix
  Index residual_df = 0;       // n_rows - n_predictors - 1
  Vector coefficient_variances;
};

/// Least squares of outcome on [1 | predictors]. A positive ridge adds
/// ridge * diag(X^T X) to the cross-product diagonal, making the penalty
/// invariant to column scale. Throws SingularDesign when the (ridged)
/// cross-product matrix is not positive definite.
OlsFit ols_fit(const Eigen::Ref<const Matrix>& predictors,
               const Eigen::Ref<const Vector>& outcome, double ridge = 0.0);

}  // namespace multimp

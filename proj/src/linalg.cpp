#include "multimp/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace multimp {

bool is_symmetric(const Eigen::Ref<const Matrix>& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    }
  }
  return true;
}

Matrix cholesky_lower(const Eigen::Ref<const Matrix>& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky_lower: matrix must be square");
  }
  if (!is_symmetric(a)) {
    throw std::invalid_argument("cholesky_lower: matrix must be symmetric");
  }
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot <= kCholeskyPivotTol) {
      throw NotPositiveDefinite("cholesky_lower: pivot " + std::to_string(pivot) +
                                " at column " + std::to_string(j));
    }
    l(j, j) = std::sqrt(pivot);
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return l;
}

Matrix nearest_pd_repair(const Eigen::Ref<const Matrix>& a, double floor) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("nearest_pd_repair: matrix must be square");
  }
  if (!is_symmetric(a)) {
    throw std::invalid_argument("nearest_pd_repair: matrix must be symmetric");
  }
  if (((a.diagonal().array() - 1.0).abs() > 1e-8).any()) {
    throw std::invalid_argument("nearest_pd_repair: matrix must have unit diagonal");
  }
  if (!(floor > 0.0)) {
    throw std::invalid_argument("nearest_pd_repair: floor must be positive");
  }

  Matrix result = a;
  // Clip slightly above the floor so the subsequent diagonal rescale cannot
  // drop the smallest eigenvalue back below it.
  const double clip = floor * 1.125;
  for (int pass = 0; pass < 64; ++pass) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(result);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("nearest_pd_repair: eigendecomposition failed");
    }
    if (es.eigenvalues().minCoeff() >= floor) {
      return result;
    }
    const Vector clipped = es.eigenvalues().cwiseMax(clip);
    result = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    const Vector scale = result.diagonal().cwiseSqrt().cwiseInverse();
    result = scale.asDiagonal() * result * scale.asDiagonal();
    result = ((result + result.transpose()) / 2.0).eval();
    result.diagonal().setOnes();
  }
  throw std::runtime_error("nearest_pd_repair: did not converge");
}

Matrix sample_mvn(const Eigen::Ref<const Matrix>& corr, Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_mvn: n must be positive");
  const Matrix l = cholesky_lower(corr);
  const Index dim = corr.rows();
  Matrix out(n, dim);
  Vector z(dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < dim; ++j) z(j) = rng.normal();
    out.row(i).noalias() = (l.triangularView<Eigen::Lower>() * z).transpose();
  }
  return out;
}

OlsFit ols_fit(const Eigen::Ref<const Matrix>& predictors,
               const Eigen::Ref<const Vector>& outcome, double ridge) {
  const Index n = predictors.rows();
  const Index q = predictors.cols();
  if (outcome.size() != n) {
    throw std::invalid_argument("ols_fit: outcome length must match predictor rows");
  }
  if (n <= q + 1) {
    throw TooFewObserved("ols_fit: need n_rows > n_predictors + 1");
  }
  if (ridge < 0.0) {
    throw std::invalid_argument("ols_fit: ridge must be non-negative");
  }

  Matrix design(n, q + 1);
  design.col(0).setOnes();
  design.rightCols(q) = predictors;

  Matrix xtx = design.transpose() * design;
  if (ridge > 0.0) {
    xtx.diagonal() *= 1.0 + ridge;
  }

  Matrix l;
  try {
    l = cholesky_lower(xtx);
  } catch (const NotPositiveDefinite&) {
    throw SingularDesign("ols_fit: cross-product matrix is singular (collinear design)");
  }

  const Vector xty = design.transpose() * outcome;
  const Vector w = l.triangularView<Eigen::Lower>().solve(xty);
  Vector beta = l.transpose().triangularView<Eigen::Upper>().solve(w);

  const Vector residuals = outcome - design * beta;
  const Index df = n - q - 1;
  const double rv = residuals.squaredNorm() / static_cast<double>(df);

  const Matrix l_inv =
      l.triangularView<Eigen::Lower>().solve(Matrix::Identity(q + 1, q + 1));
  Matrix inv = l_inv.transpose() * l_inv;

  OlsFit fit;
  fit.coefficients = std::move(beta);
  fit.residual_variance = rv;
  fit.coefficient_variances = rv * inv.diagonal();
  fit.xtx_inverse = std::move(inv);
  fit.residual_df = df;
  return fit;
}

}  // namespace multimp

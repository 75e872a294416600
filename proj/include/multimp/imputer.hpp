#pragma once

#include <string>
#include <vector>

#include "multimp/dataset.hpp"
#include "multimp/linalg.hpp"
#include "multimp/rng.hpp"

namespace multimp {

enum class ImputeMethod { norm, pmm };

std::string to_string(ImputeMethod method);
ImputeMethod impute_method_from_string(const std::string& name);

/// Ridge applied inside imputation fits only; analysis fits use 0.
inline constexpr double kImputationRidge = 1e-5;
inline constexpr int kDefaultSweeps = 10;
inline constexpr int kDefaultPmmDonors = 5;

/// Chained-equations plan: which columns to impute, from which predictors,
/// by which method.
struct ImputationSpec {
  struct Target {
    std::string name;
    std::vector<std::string> predictors;
    ImputeMethod method = ImputeMethod::norm;
  };

  std::vector<Target> targets;
  int iterations = kDefaultSweeps;
  int m = 5;
  int pmm_donors = kDefaultPmmDonors;
};

/// Deterministic core of the Bayesian linear regression draw, taking the
/// random inputs as arguments: g is the chi-square draw for the residual
/// variance, z the standard normal vector behind beta*, eps the standard
/// normal noise for the imputed rows. With g = residual df and z = eps = 0
/// the result is exactly the least-squares prediction.
Vector norm_draw_given(const Eigen::Ref<const Matrix>& x_obs,
                       const Eigen::Ref<const Vector>& y_obs,
                       const Eigen::Ref<const Matrix>& x_mis, double ridge, double g,
                       const Eigen::Ref<const Vector>& z,
                       const Eigen::Ref<const Vector>& eps);

/// Bayesian linear regression imputation draw: fit on the observed rows,
/// draw sigma*^2 = SSE / chi2(n_obs - q - 1), draw beta* around the fit, and
/// return x_mis * beta* + sigma* * noise. Draw order: g, then z, then eps.
Vector norm_draw(const Eigen::Ref<const Matrix>& x_obs,
                 const Eigen::Ref<const Vector>& y_obs,
                 const Eigen::Ref<const Matrix>& x_mis, double ridge, RngStream& rng);

/// Predictive mean matching with `donors` candidates: donors are ranked by
/// |eta*_mis - eta_obs| where eta_obs uses the least-squares fit and
/// eta*_mis the posterior draw; one of the closest `donors` observed values
/// is returned per missing row.
Vector pmm_draw(const Eigen::Ref<const Matrix>& x_obs,
                const Eigen::Ref<const Vector>& y_obs,
                const Eigen::Ref<const Matrix>& x_mis, double ridge, int donors,
                RngStream& rng);

/// Run `spec.m` independent chained-equations chains over the dataset. Each
/// chain initializes missing cells from the observed margin of its column,
/// then performs `spec.iterations` sweeps re-imputing each target in spec
/// order from the current values of its predictors. Chain c draws from
/// base.child(c). Observed cells are never modified.
CompletedCollection chained_impute(const TwoWaveDataset& d, const ImputationSpec& spec,
                                   const RngStream& base);

}  // namespace multimp

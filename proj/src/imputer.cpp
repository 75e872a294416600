#include "multimp/imputer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "multimp/distributions.hpp"

namespace multimp {

std::string to_string(ImputeMethod method) {
  return method == ImputeMethod::norm ? "norm" : "pmm";
}

ImputeMethod impute_method_from_string(const std::string& name) {
  if (name == "norm") return ImputeMethod::norm;
  if (name == "pmm") return ImputeMethod::pmm;
  throw std::invalid_argument("unknown imputation method '" + name + "'");
}

namespace {

struct Posterior {
  Vector beta_hat;
  Vector beta_star;
  double sigma_star = 0.0;
};

Posterior draw_posterior(const Eigen::Ref<const Matrix>& x_obs,
                         const Eigen::Ref<const Vector>& y_obs, double ridge, double g,
                         const Eigen::Ref<const Vector>& z) {
  const OlsFit fit = ols_fit(x_obs, y_obs, ridge);
  if (!(g > 0.0)) throw std::invalid_argument("norm draw: chi-square draw must be positive");
  if (z.size() != fit.coefficients.size()) {
    throw std::invalid_argument("norm draw: z length must be n_predictors + 1");
  }
  const double sse = fit.residual_variance * static_cast<double>(fit.residual_df);
  Posterior post;
  post.sigma_star = std::sqrt(sse / g);
  const Matrix factor = cholesky_lower(fit.xtx_inverse);
  post.beta_star = fit.coefficients + post.sigma_star * (factor * z);
  post.beta_hat = fit.coefficients;
  return post;
}

Vector with_intercept_times(const Eigen::Ref<const Matrix>& x, const Vector& beta) {
  return (x * beta.tail(beta.size() - 1)).array() + beta(0);
}

void check_norm_pre(Index n_obs, Index q, Index min_obs) {
  if (n_obs < min_obs) {
    throw TooFewObserved("imputation draw: " + std::to_string(n_obs) +
                         " observed rows, need at least " + std::to_string(min_obs) +
                         " for " + std::to_string(q) + " predictors");
  }
}

}  // namespace

Vector norm_draw_given(const Eigen::Ref<const Matrix>& x_obs,
                       const Eigen::Ref<const Vector>& y_obs,
                       const Eigen::Ref<const Matrix>& x_mis, double ridge, double g,
                       const Eigen::Ref<const Vector>& z,
                       const Eigen::Ref<const Vector>& eps) {
  if (x_mis.rows() == 0) return Vector();
  if (eps.size() != x_mis.rows()) {
    throw std::invalid_argument("norm draw: eps length must match missing rows");
  }
  const Posterior post = draw_posterior(x_obs, y_obs, ridge, g, z);
  return with_intercept_times(x_mis, post.beta_star) + post.sigma_star * eps;
}

Vector norm_draw(const Eigen::Ref<const Matrix>& x_obs,
                 const Eigen::Ref<const Vector>& y_obs,
                 const Eigen::Ref<const Matrix>& x_mis, double ridge, RngStream& rng) {
  if (x_mis.rows() == 0) return Vector();
  const Index q = x_obs.cols();
  check_norm_pre(x_obs.rows(), q, q + 3);
  const double g = draw_chi_square(static_cast<double>(x_obs.rows() - q - 1), rng);
  Vector z(q + 1);
  for (Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  Vector eps(x_mis.rows());
  for (Index i = 0; i < eps.size(); ++i) eps(i) = rng.normal();
  return norm_draw_given(x_obs, y_obs, x_mis, ridge, g, z, eps);
}

Vector pmm_draw(const Eigen::Ref<const Matrix>& x_obs,
                const Eigen::Ref<const Vector>& y_obs,
                const Eigen::Ref<const Matrix>& x_mis, double ridge, int donors,
                RngStream& rng) {
  if (x_mis.rows() == 0) return Vector();
  if (donors < 1) throw std::invalid_argument("pmm_draw: donors must be positive");
  const Index q = x_obs.cols();
  check_norm_pre(x_obs.rows(), q, std::max<Index>(donors, q + 3));

  const double g = draw_chi_square(static_cast<double>(x_obs.rows() - q - 1), rng);
  Vector z(q + 1);
  for (Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  const Posterior post = draw_posterior(x_obs, y_obs, ridge, g, z);

  const Vector eta_obs = with_intercept_times(x_obs, post.beta_hat);
  const Vector eta_mis = with_intercept_times(x_mis, post.beta_star);

  const Index n_obs = x_obs.rows();
  const auto k = static_cast<Index>(donors);
  std::vector<std::pair<double, Index>> ranked(static_cast<size_t>(n_obs));
  Vector out(x_mis.rows());
  for (Index i = 0; i < x_mis.rows(); ++i) {
    for (Index j = 0; j < n_obs; ++j) {
      ranked[static_cast<size_t>(j)] = {std::abs(eta_mis(i) - eta_obs(j)), j};
    }
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());
    const Index pick = static_cast<Index>(rng.uniform_int(donors));
    out(i) = y_obs(ranked[static_cast<size_t>(pick)].second);
  }
  return out;
}

namespace {

struct TargetState {
  Index column = 0;
  ImputeMethod method = ImputeMethod::norm;
  std::vector<Index> predictor_cols;
  std::vector<Index> observed_rows;
  std::vector<Index> missing_rows;
};

std::vector<TargetState> prepare_targets(const TwoWaveDataset& d, const ImputationSpec& spec) {
  std::set<std::string> target_names;
  std::vector<TargetState> states;
  for (const auto& target : spec.targets) {
    if (!target_names.insert(target.name).second) {
      throw std::invalid_argument("chained_impute: duplicate target '" + target.name + "'");
    }
    TargetState state;
    state.column = d.schema().index_of(target.name);
    state.method = target.method;
    for (const auto& pred : target.predictors) {
      if (pred == target.name) {
        throw std::invalid_argument("chained_impute: target '" + target.name +
                                    "' listed as its own predictor");
      }
      state.predictor_cols.push_back(d.schema().index_of(pred));
    }
    for (Index row = 0; row < d.rows(); ++row) {
      (d.observed(row, state.column) ? state.observed_rows : state.missing_rows).push_back(row);
    }
    if (state.observed_rows.empty()) {
      throw EmptyColumn("chained_impute: target '" + target.name + "' has no observed values");
    }
    states.push_back(std::move(state));
  }
  return states;
}

}  // namespace

CompletedCollection chained_impute(const TwoWaveDataset& d, const ImputationSpec& spec,
                                   const RngStream& base) {
  if (spec.m < 1) throw std::invalid_argument("chained_impute: m must be positive");
  if (spec.iterations < 1) throw std::invalid_argument("chained_impute: iterations must be positive");

  std::vector<TargetState> targets = prepare_targets(d, spec);

  // Columns that keep missing cells but are not imputed must never feed a
  // predictor matrix.
  std::set<Index> target_cols;
  for (const auto& t : targets) target_cols.insert(t.column);
  for (const auto& t : targets) {
    for (Index col : t.predictor_cols) {
      if (!target_cols.count(col) && !d.mask().col(col).all()) {
        throw std::invalid_argument("chained_impute: predictor '" +
                                    d.schema().column(col).name +
                                    "' has missing values but is not imputed");
      }
    }
  }

  CompletedCollection out;
  out.shape = CompletedCollection::Shape::flat;
  out.m1 = spec.m;
  out.m2 = 1;
  out.datasets.reserve(static_cast<size_t>(spec.m));

  const BoolArray full_mask = BoolArray::Constant(d.rows(), d.cols(), true);

  for (int chain = 0; chain < spec.m; ++chain) {
    RngStream rng = base.child(static_cast<std::uint64_t>(chain));
    Matrix work = d.values();

    // Start every missing cell at a draw from its column's observed margin.
    for (const auto& t : targets) {
      for (Index row : t.missing_rows) {
        const Index pick = t.observed_rows[static_cast<size_t>(
            rng.uniform_int(static_cast<int>(t.observed_rows.size())))];
        work(row, t.column) = d.values()(pick, t.column);
      }
    }

    for (int sweep = 0; sweep < spec.iterations; ++sweep) {
      for (const auto& t : targets) {
        if (t.missing_rows.empty()) continue;
        const Index q = static_cast<Index>(t.predictor_cols.size());
        Matrix x_obs(static_cast<Index>(t.observed_rows.size()), q);
        Vector y_obs(static_cast<Index>(t.observed_rows.size()));
        Matrix x_mis(static_cast<Index>(t.missing_rows.size()), q);
        for (size_t i = 0; i < t.observed_rows.size(); ++i) {
          const Index row = t.observed_rows[i];
          y_obs(static_cast<Index>(i)) = work(row, t.column);
          for (Index j = 0; j < q; ++j) {
            x_obs(static_cast<Index>(i), j) = work(row, t.predictor_cols[static_cast<size_t>(j)]);
          }
        }
        for (size_t i = 0; i < t.missing_rows.size(); ++i) {
          const Index row = t.missing_rows[i];
          for (Index j = 0; j < q; ++j) {
            x_mis(static_cast<Index>(i), j) = work(row, t.predictor_cols[static_cast<size_t>(j)]);
          }
        }
        const Vector imputed =
            t.method == ImputeMethod::norm
                ? norm_draw(x_obs, y_obs, x_mis, kImputationRidge, rng)
                : pmm_draw(x_obs, y_obs, x_mis, kImputationRidge, spec.pmm_donors, rng);
        for (size_t i = 0; i < t.missing_rows.size(); ++i) {
          work(t.missing_rows[i], t.column) = imputed(static_cast<Index>(i));
        }
      }
    }

    out.datasets.emplace_back(d.schema(), std::move(work), full_mask);
  }
  return out;
}

}  // namespace multimp

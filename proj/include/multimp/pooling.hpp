#pragma once

#include <utility>
#include <vector>

#include "multimp/dataset.hpp"

namespace multimp {

/// Per-dataset estimates and sampling variances for one scalar parameter,
/// flat over m datasets or nested over m1 x m2 (row-major, member (k, l) at
/// index k * m2 + l). The grid must be full and variances non-negative.
struct EstimateGrid {
  CompletedCollection::Shape shape = CompletedCollection::Shape::flat;
  int m1 = 0;
  int m2 = 1;
  std::vector<double> q_hat;
  std::vector<double> u_bar;
};

/// Pooled estimate with its variance decomposition and 95% interval. nu is
/// +inf when the between variance vanishes; the interval then uses the
/// normal quantile.
struct PooledResult {
  double q_bar = 0.0;   // pooled estimate
  double u_bar = 0.0;   // mean sampling variance
  double b = 0.0;       // between variance
  double w = 0.0;       // within-nest variance (0 for flat grids)
  double t = 0.0;       // total variance
  double nu = 0.0;      // degrees of freedom
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Pooling rules for independent datasets:
///   q_bar = mean Q_k,  u_bar = mean U_k,  B = sum (Q_k - q_bar)^2 / (m-1),
///   T = u_bar + (1 + 1/m) B,  1/nu = [ (1+1/m) B / T ]^2 / (m-1).
/// Throws TooFewDatasets for m < 2.
PooledResult pool_flat(const EstimateGrid& g);

/// Pooling rules for two-level nested datasets:
///   W = sum_k sum_l (Q_kl - Qbar_k)^2 / (m1 (m2-1))     (0 when m2 = 1)
///   B = m2 / (m1-1) * sum_k (Qbar_k - q_bar)^2
///   T = u_bar + (1/m2)(1 + 1/m1) B + (1 - 1/m2) W
///   1/nu = [ (1/m2)(1+1/m1) B / T ]^2 / (m1-1)
///        + [ (1-1/m2) W / T ]^2 / (m1 (m2-1))           (second term 0 when m2 = 1)
/// With m2 = 1 this reduces exactly to pool_flat. Throws TooFewDatasets for
/// m1 < 2.
PooledResult pool_nested(const EstimateGrid& g);

/// Dispatch on the grid's shape.
PooledResult pool(const EstimateGrid& g);

/// q_bar +/- t_{(1+level)/2, nu} * sqrt(T); the normal quantile when nu is
/// +inf, a point interval when T = 0.
std::pair<double, double> confidence_interval(const PooledResult& r, double level);

}  // namespace multimp

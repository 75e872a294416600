#include "multimp/pooling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "multimp/distributions.hpp"

namespace multimp {

namespace {

constexpr double kLevel = 0.95;

void check_grid(const EstimateGrid& g) {
  const size_t expected = static_cast<size_t>(g.m1) * static_cast<size_t>(g.m2);
  if (g.shape == CompletedCollection::Shape::flat) {
    if (g.q_hat.size() != static_cast<size_t>(g.m1)) {
      throw std::invalid_argument("pool: flat grid size does not match m");
    }
  } else if (g.q_hat.size() != expected) {
    throw std::invalid_argument("pool: nested grid size does not match m1 * m2");
  }
  if (g.u_bar.size() != g.q_hat.size()) {
    throw std::invalid_argument("pool: estimate and variance grids differ in size");
  }
  for (double u : g.u_bar) {
    if (u < 0.0) throw std::invalid_argument("pool: sampling variances must be >= 0");
  }
}

void finish(PooledResult& r, double inv_nu) {
  r.nu = inv_nu > 0.0 ? 1.0 / inv_nu : std::numeric_limits<double>::infinity();
  std::tie(r.ci_low, r.ci_high) = confidence_interval(r, kLevel);
}

// Mean anchored at the first element; identical inputs average to themselves
// exactly, so pooling m copies of one estimate gives B = W = 0 exactly.
double shifted_mean(const std::vector<double>& values, size_t begin, size_t count) {
  const double anchor = values[begin];
  double sum = 0.0;
  for (size_t i = 0; i < count; ++i) sum += values[begin + i] - anchor;
  return anchor + sum / static_cast<double>(count);
}

}  // namespace

PooledResult pool_flat(const EstimateGrid& g) {
  check_grid(g);
  const size_t m = g.q_hat.size();
  if (m < 2) throw TooFewDatasets("pool_flat: need at least 2 datasets");
  const double md = static_cast<double>(m);

  PooledResult r;
  r.q_bar = shifted_mean(g.q_hat, 0, m);
  r.u_bar = shifted_mean(g.u_bar, 0, m);
  for (size_t k = 0; k < m; ++k) {
    const double dev = g.q_hat[k] - r.q_bar;
    r.b += dev * dev;
  }
  r.b /= md - 1.0;
  r.w = 0.0;
  r.t = r.u_bar + (1.0 + 1.0 / md) * r.b;

  double inv_nu = 0.0;
  if (r.b > 0.0) {
    const double frac = (1.0 + 1.0 / md) * r.b / r.t;
    inv_nu = frac * frac / (md - 1.0);
  }
  finish(r, inv_nu);
  return r;
}

PooledResult pool_nested(const EstimateGrid& g) {
  check_grid(g);
  const int m1 = g.m1;
  const int m2 = g.m2;
  if (m1 < 2) throw TooFewDatasets("pool_nested: need at least 2 nests");
  if (m2 < 1) throw std::invalid_argument("pool_nested: m2 must be positive");
  const double m1d = m1;
  const double m2d = m2;

  PooledResult r;
  r.q_bar = shifted_mean(g.q_hat, 0, g.q_hat.size());
  r.u_bar = shifted_mean(g.u_bar, 0, g.u_bar.size());
  std::vector<double> nest_mean(static_cast<size_t>(m1), 0.0);
  for (int k = 0; k < m1; ++k) {
    nest_mean[static_cast<size_t>(k)] =
        shifted_mean(g.q_hat, static_cast<size_t>(k * m2), static_cast<size_t>(m2));
  }

  if (m2 >= 2) {
    for (int k = 0; k < m1; ++k) {
      for (int l = 0; l < m2; ++l) {
        const double dev = g.q_hat[static_cast<size_t>(k * m2 + l)] - nest_mean[static_cast<size_t>(k)];
        r.w += dev * dev;
      }
    }
    r.w /= m1d * (m2d - 1.0);
  }

  for (int k = 0; k < m1; ++k) {
    const double dev = nest_mean[static_cast<size_t>(k)] - r.q_bar;
    r.b += dev * dev;
  }
  // Divide before scaling so the m2 = 1 case reduces to pool_flat bit for bit.
  r.b /= m1d - 1.0;
  r.b *= m2d;

  r.t = r.u_bar + (1.0 / m2d) * (1.0 + 1.0 / m1d) * r.b + (1.0 - 1.0 / m2d) * r.w;

  double inv_nu = 0.0;
  if (r.b > 0.0) {
    const double frac = (1.0 / m2d) * (1.0 + 1.0 / m1d) * r.b / r.t;
    inv_nu += frac * frac / (m1d - 1.0);
  }
  if (m2 >= 2 && r.w > 0.0) {
    const double frac = (1.0 - 1.0 / m2d) * r.w / r.t;
    inv_nu += frac * frac / (m1d * (m2d - 1.0));
  }
  finish(r, inv_nu);
  return r;
}

PooledResult pool(const EstimateGrid& g) {
  return g.shape == CompletedCollection::Shape::flat ? pool_flat(g) : pool_nested(g);
}

std::pair<double, double> confidence_interval(const PooledResult& r, double level) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw std::domain_error("confidence_interval: level must lie in (0, 1)");
  }
  if (r.t < 0.0) throw std::invalid_argument("confidence_interval: negative total variance");
  if (r.t == 0.0) return {r.q_bar, r.q_bar};
  const double p = 0.5 * (1.0 + level);
  const double quantile =
      std::isfinite(r.nu) ? t_quantile(p, r.nu) : std_normal_quantile(p);
  const double half = quantile * std::sqrt(r.t);
  return {r.q_bar - half, r.q_bar + half};
}

}  // namespace multimp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "multimp/pooling.hpp"
#include "multimp/rng.hpp"

using namespace multimp;

namespace {

EstimateGrid flat_grid(std::vector<double> q, std::vector<double> u) {
  EstimateGrid g;
  g.shape = CompletedCollection::Shape::flat;
  g.m1 = static_cast<int>(q.size());
  g.m2 = 1;
  g.q_hat = std::move(q);
  g.u_bar = std::move(u);
  return g;
}

EstimateGrid nested_grid(int m1, int m2, std::vector<double> q, std::vector<double> u) {
  EstimateGrid g;
  g.shape = CompletedCollection::Shape::nested;
  g.m1 = m1;
  g.m2 = m2;
  g.q_hat = std::move(q);
  g.u_bar = std::move(u);
  return g;
}

bool all_fields_close(const PooledResult& a, const PooledResult& b, double tol) {
  auto close = [tol](double x, double y) {
    if (std::isinf(x) || std::isinf(y)) return x == y;
    return std::abs(x - y) <= tol;
  };
  return close(a.q_bar, b.q_bar) && close(a.u_bar, b.u_bar) && close(a.b, b.b) &&
         close(a.w, b.w) && close(a.t, b.t) && close(a.nu, b.nu) &&
         close(a.ci_low, b.ci_low) && close(a.ci_high, b.ci_high);
}

}  // namespace

TEST_CASE("flat pooling reproduces the hand-worked grid") {
  const PooledResult r = pool_flat(flat_grid({1, 2, 3}, {1, 1, 1}));
  CHECK(r.q_bar == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.u_bar == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.b == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.w == 0.0);
  CHECK(r.t == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK(r.nu == doctest::Approx(6.125).epsilon(1e-12));

  // interval built from the frozen t quantile at nu = 6.125
  const double half = 2.4348578231783353 * std::sqrt(7.0 / 3.0);
  CHECK(r.ci_low == doctest::Approx(2.0 - half).epsilon(1e-8));
  CHECK(r.ci_high == doctest::Approx(2.0 + half).epsilon(1e-8));
}

TEST_CASE("flat pooling of identical estimates collapses the between variance") {
  const PooledResult r = pool_flat(flat_grid({1.5, 1.5, 1.5, 1.5}, {0.25, 0.25, 0.25, 0.25}));
  CHECK(r.b == 0.0);
  CHECK(r.t == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::isinf(r.nu));
  const double half = 1.959963984540054 * 0.5;
  CHECK(r.ci_low == doctest::Approx(1.5 - half).epsilon(1e-10));
  CHECK(r.ci_high == doctest::Approx(1.5 + half).epsilon(1e-10));
}

TEST_CASE("pooling a single dataset is refused") {
  CHECK_THROWS_AS(pool_flat(flat_grid({1.0}, {1.0})), TooFewDatasets);
  CHECK_THROWS_AS(pool_nested(nested_grid(1, 3, {1, 2, 3}, {1, 1, 1})), TooFewDatasets);
}

TEST_CASE("nested pooling reproduces the hand-worked two-by-two grid") {
  const PooledResult r = pool_nested(nested_grid(2, 2, {1, 2, 3, 4}, {0.5, 0.5, 0.5, 0.5}));
  CHECK(r.q_bar == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(r.u_bar == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.w == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.b == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.t == doctest::Approx(3.75).epsilon(1e-14));
  CHECK(r.nu == doctest::Approx(450.0 / 289.0).epsilon(1e-12));
}

TEST_CASE("nested pooling with singleton nests equals flat pooling") {
  const PooledResult nested = pool_nested(nested_grid(3, 1, {1, 2, 3}, {1, 1, 1}));
  const PooledResult flat = pool_flat(flat_grid({1, 2, 3}, {1, 1, 1}));
  CHECK(all_fields_close(nested, flat, 0.0));
  CHECK(nested.t == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK(nested.nu == doctest::Approx(6.125).epsilon(1e-12));
}

TEST_CASE("singleton-nest reduction holds on random grids") {
  RngStream rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + rng.uniform_int(6);
    std::vector<double> q, u;
    for (int i = 0; i < m; ++i) {
      q.push_back(rng.normal());
      u.push_back(0.05 + rng.uniform());
    }
    const PooledResult nested = pool_nested(nested_grid(m, 1, q, u));
    const PooledResult flat = pool_flat(flat_grid(q, u));
    CHECK(all_fields_close(nested, flat, 1e-12));
  }
}

TEST_CASE("all-equal nested estimates give infinite degrees of freedom") {
  const PooledResult r = pool_nested(nested_grid(2, 3, {2, 2, 2, 2, 2, 2}, {1, 1, 1, 1, 1, 1}));
  CHECK(r.b == 0.0);
  CHECK(r.w == 0.0);
  CHECK(r.t == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::isinf(r.nu));
}

TEST_CASE("total variance dominates the sampling variance and grows with B") {
  RngStream rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + rng.uniform_int(8);
    std::vector<double> q, u;
    for (int i = 0; i < m; ++i) {
      q.push_back(3.0 * rng.normal());
      u.push_back(rng.uniform());
    }
    const PooledResult r = pool_flat(flat_grid(q, u));
    CHECK(r.t >= r.u_bar);
    CHECK(r.b >= 0.0);

    // widening the spread of estimates strictly raises T
    std::vector<double> q_wide = q;
    const double mean = r.q_bar;
    for (double& value : q_wide) value = mean + 2.0 * (value - mean);
    if (r.b > 0.0) {
      const PooledResult wide = pool_flat(flat_grid(q_wide, u));
      CHECK(wide.t > r.t);
    }
  }
}

TEST_CASE("pooling is permutation invariant") {
  RngStream rng(73);
  std::vector<double> q, u;
  for (int i = 0; i < 6; ++i) {
    q.push_back(rng.normal());
    u.push_back(rng.uniform() + 0.01);
  }
  const PooledResult base = pool_flat(flat_grid(q, u));

  std::mt19937 shuffler(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<size_t> order = {0, 1, 2, 3, 4, 5};
    std::shuffle(order.begin(), order.end(), shuffler);
    std::vector<double> q2, u2;
    for (size_t idx : order) {
      q2.push_back(q[idx]);
      u2.push_back(u[idx]);
    }
    CHECK(all_fields_close(pool_flat(flat_grid(q2, u2)), base, 1e-12));
  }

  // nest-level shuffling for the nested rules
  std::vector<double> qn = {1.0, 1.25, 2.0, 2.5, -0.5, 0.0};
  std::vector<double> un = {0.3, 0.4, 0.2, 0.1, 0.5, 0.6};
  const PooledResult nested_base = pool_nested(nested_grid(3, 2, qn, un));
  const PooledResult nested_swapped = pool_nested(
      nested_grid(3, 2, {2.0, 2.5, -0.5, 0.0, 1.0, 1.25}, {0.2, 0.1, 0.5, 0.6, 0.3, 0.4}));
  CHECK(all_fields_close(nested_swapped, nested_base, 1e-12));
}

TEST_CASE("pooling identical copies reproduces the single-dataset answer") {
  const double estimate = 0.8123;
  const double variance = 0.0456;
  const PooledResult flat = pool_flat(flat_grid(std::vector<double>(5, estimate),
                                                std::vector<double>(5, variance)));
  CHECK(flat.q_bar == doctest::Approx(estimate).epsilon(1e-14));
  CHECK(flat.u_bar == doctest::Approx(variance).epsilon(1e-14));
  CHECK(flat.b == 0.0);
  CHECK(flat.t == doctest::Approx(variance).epsilon(1e-14));

  const PooledResult nested = pool_nested(nested_grid(2, 3, std::vector<double>(6, estimate),
                                                      std::vector<double>(6, variance)));
  CHECK(nested.b == 0.0);
  CHECK(nested.w == 0.0);
  CHECK(nested.t == doctest::Approx(variance).epsilon(1e-14));
}

TEST_CASE("confidence intervals use the right reference distribution") {
  PooledResult r;
  r.q_bar = 0.0;
  r.t = 1.0;
  r.nu = std::numeric_limits<double>::infinity();
  const auto [lo, hi] = confidence_interval(r, 0.95);
  CHECK(lo == doctest::Approx(-1.959963984540054).epsilon(1e-10));
  CHECK(hi == doctest::Approx(1.959963984540054).epsilon(1e-10));

  r.t = 0.0;
  r.q_bar = 3.25;
  const auto [plo, phi] = confidence_interval(r, 0.95);
  CHECK(plo == 3.25);
  CHECK(phi == 3.25);

  r.t = 1.0;
  r.nu = 10.0;
  const auto [tlo, thi] = confidence_interval(r, 0.95);
  CHECK(thi == doctest::Approx(2.2281388519649385).epsilon(1e-8));
  CHECK(tlo == doctest::Approx(-thi).epsilon(1e-12));

  CHECK_THROWS_AS(confidence_interval(r, 0.0), std::domain_error);
  CHECK_THROWS_AS(confidence_interval(r, 1.0), std::domain_error);
}

TEST_CASE("grids are validated before pooling") {
  EstimateGrid ragged = nested_grid(2, 2, {1, 2, 3}, {1, 1, 1});
  CHECK_THROWS_AS(pool_nested(ragged), std::invalid_argument);
  EstimateGrid negative = flat_grid({1, 2}, {1, -0.5});
  CHECK_THROWS_AS(pool_flat(negative), std::invalid_argument);
  EstimateGrid mismatched = flat_grid({1, 2, 3}, {1, 1});
  CHECK_THROWS_AS(pool_flat(mismatched), std::invalid_argument);
}

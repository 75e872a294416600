#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "multimp/dgp.hpp"
#include "multimp/distributions.hpp"
#include "multimp/linalg.hpp"
#include "multimp/rng.hpp"

using namespace multimp;

namespace {

Matrix random_correlation(int dim, RngStream& rng) {
  Matrix b(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) b(i, j) = rng.normal();
  }
  Matrix a = b * b.transpose() + Matrix::Identity(dim, dim) * 0.5;
  const Vector scale = a.diagonal().cwiseSqrt().cwiseInverse();
  a = scale.asDiagonal() * a * scale.asDiagonal();
  a = ((a + a.transpose()) / 2.0).eval();
  a.diagonal().setOnes();
  return a;
}

Matrix sample_correlations(const Matrix& draws) {
  const Index n = draws.rows();
  const Matrix centered = draws.rowwise() - draws.colwise().mean();
  Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
  const Vector scale = cov.diagonal().cwiseSqrt().cwiseInverse();
  return scale.asDiagonal() * cov * scale.asDiagonal();
}

}  // namespace

TEST_CASE("rng streams are reproducible and path-keyed") {
  RngStream a(42, {1, 2});
  RngStream b(42, {1, 2});
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // child derivation matches direct path construction and ignores how many
  // draws the parent has consumed
  RngStream parent(42, {1});
  for (int i = 0; i < 17; ++i) parent.uniform();
  RngStream via_child = parent.child(2);
  RngStream direct(42, {1, 2});
  for (int i = 0; i < 100; ++i) CHECK(via_child.next_u64() == direct.next_u64());

  RngStream other_path(42, {1, 3});
  RngStream other_seed(43, {1, 2});
  CHECK(RngStream(42, {1, 2}).next_u64() != other_path.next_u64());
  CHECK(RngStream(42, {1, 2}).next_u64() != other_seed.next_u64());
}

TEST_CASE("rng uniform and normal draws have the right moments") {
  RngStream rng(7);
  const int n = 200000;
  double usum = 0.0, nsum = 0.0, nsq = 0.0;
  for (int i = 0; i < n; ++i) {
    usum += rng.uniform();
    const double z = rng.normal();
    nsum += z;
    nsq += z * z;
  }
  CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(nsum / n == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
  CHECK(nsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("cholesky of the identity is the identity") {
  const Matrix l = cholesky_lower(Matrix::Identity(4, 4));
  CHECK((l - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cholesky matches the hand-worked 2x2 factor") {
  Matrix a(2, 2);
  a << 1.0, 0.5, 0.5, 1.0;
  const Matrix l = cholesky_lower(a);
  CHECK(l(0, 0) == doctest::Approx(1.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == doctest::Approx(0.5));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("cholesky rejects the indefinite tabulated scenario-4 matrix") {
  CHECK_THROWS_AS(cholesky_lower(scenario_matrix_as_printed(4)), NotPositiveDefinite);
}

TEST_CASE("cholesky factors reproduce their input") {
  RngStream rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + trial % 7;
    const Matrix a = random_correlation(dim, rng);
    const Matrix l = cholesky_lower(a);
    CHECK((l * l.transpose() - a).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pd repair leaves positive definite input unchanged") {
  Matrix a(3, 3);
  a << 1.0, 0.3, 0.2, 0.3, 1.0, 0.1, 0.2, 0.1, 1.0;
  const Matrix repaired = nearest_pd_repair(a);
  CHECK((repaired - a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pd repair lifts the indefinite scenario matrices above the floor") {
  const double floor = 1e-4;
  for (int id : {4, 8}) {
    const Matrix printed = scenario_matrix_as_printed(id);
    Eigen::SelfAdjointEigenSolver<Matrix> bad(printed);
    CHECK(bad.eigenvalues().minCoeff() < 0.0);

    const Matrix repaired = nearest_pd_repair(printed, floor);
    Eigen::SelfAdjointEigenSolver<Matrix> es(repaired);
    CHECK(es.eigenvalues().minCoeff() >= floor);
    CHECK((repaired.diagonal().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK_NOTHROW(cholesky_lower(repaired));
  }
}

TEST_CASE("pd repair is idempotent") {
  for (int id : {4, 8}) {
    const Matrix once = nearest_pd_repair(scenario_matrix_as_printed(id));
    const Matrix twice = nearest_pd_repair(once);
    CHECK((twice - once).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("mvn sampling with identity correlation is uncorrelated") {
  RngStream rng(101);
  const Matrix draws = sample_mvn(Matrix::Identity(4, 4), 1000000, rng);
  const Matrix corr = sample_correlations(draws);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      if (i != j) CHECK(std::abs(corr(i, j)) < 0.005);
    }
  }
}

TEST_CASE("mvn sampling reproduces an equicorrelated target") {
  RngStream rng(102);
  const Matrix target = scenario(11).matrix;  // every off-diagonal 0.5
  const Matrix draws = sample_mvn(target, 1000000, rng);
  const Matrix corr = sample_correlations(draws);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      if (i != j) CHECK(std::abs(corr(i, j) - 0.5) < 0.005);
    }
  }
}

TEST_CASE("mvn sampling handles n = 1 and fixed streams bit-reproducibly") {
  RngStream rng(103);
  const Matrix one = sample_mvn(Matrix::Identity(4, 4), 1, rng);
  CHECK(one.rows() == 1);
  CHECK(one.cols() == 4);
  CHECK(one.allFinite());

  RngStream r1(104, {5});
  RngStream r2(104, {5});
  const Matrix a = sample_mvn(scenario(11).matrix, 64, r1);
  const Matrix b = sample_mvn(scenario(11).matrix, 64, r2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ols recovers an exact linear relationship") {
  const int n = 20;
  Matrix x(n, 1);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = i;
    y(i) = 2.0 + 3.0 * i;
  }
  const OlsFit fit = ols_fit(x, y, 0.0);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.coefficients(1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.residual_variance == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
  CHECK(fit.residual_df == n - 2);
}

TEST_CASE("ols slope vanishes for an orthogonal outcome") {
  Matrix x(4, 1);
  x << -3, -1, 1, 3;
  Vector y(4);
  y << 1, -1, -1, 1;  // orthogonal to the centered predictor
  const OlsFit fit = ols_fit(x, y, 0.0);
  CHECK(fit.coefficients(1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("ols rejects duplicated predictor columns without ridge") {
  Matrix x(10, 2);
  Vector y(10);
  RngStream rng(9);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = x(i, 0);
    y(i) = rng.normal();
  }
  CHECK_THROWS_AS(ols_fit(x, y, 0.0), SingularDesign);
  CHECK_NOTHROW(ols_fit(x, y, 1e-5));
}

TEST_CASE("ols reproduces noiseless coefficients to 1e-9") {
  RngStream rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 50;
    const int q = 3;
    Matrix x(n, q);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < q; ++j) x(i, j) = rng.normal();
    }
    Vector beta(q + 1);
    for (Index j = 0; j <= q; ++j) beta(j) = rng.normal();
    Matrix design(n, q + 1);
    design.col(0).setOnes();
    design.rightCols(q) = x;
    const Vector y = design * beta;
    const OlsFit fit = ols_fit(x, y, 0.0);
    CHECK((fit.coefficients - beta).cwiseAbs().maxCoeff() < 1e-9);
    for (Index j = 0; j <= q; ++j) {
      CHECK(fit.coefficient_variances(j) ==
            doctest::Approx(fit.residual_variance * fit.xtx_inverse(j, j)));
    }
  }
}

TEST_CASE("t quantiles match a frozen reference table") {
  CHECK(t_quantile(0.975, 10) == doctest::Approx(2.2281388519649385).epsilon(1e-8));
  CHECK(t_quantile(0.975, 6.125) == doctest::Approx(2.4348578231783353).epsilon(1e-8));
  CHECK(t_quantile(0.975, 2) == doctest::Approx(4.302652729696142).epsilon(1e-8));
  CHECK(t_quantile(0.9, 3.5) == doctest::Approx(1.5765766051364045).epsilon(1e-8));
  CHECK(t_quantile(0.995, 7) == doctest::Approx(3.4994832973505026).epsilon(1e-8));
  CHECK(t_quantile(0.75, 1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(t_quantile(0.975, 421) == doctest::Approx(1.965614792008086).epsilon(1e-8));
  CHECK(t_quantile(0.6, 0.5) == doctest::Approx(0.39797542678474995).epsilon(1e-8));
}

TEST_CASE("t quantile is symmetric and normal in the limit") {
  CHECK(t_quantile(0.5, 3) == 0.0);
  CHECK(t_quantile(0.5, 1000) == 0.0);
  CHECK(t_quantile(0.025, 10) == doctest::Approx(-t_quantile(0.975, 10)).epsilon(1e-12));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(t_quantile(0.975, inf) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("quantile functions reject out-of-domain arguments") {
  CHECK_THROWS_AS(t_quantile(0.0, 5), std::domain_error);
  CHECK_THROWS_AS(t_quantile(1.0, 5), std::domain_error);
  CHECK_THROWS_AS(t_quantile(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  RngStream rng(1);
  CHECK_THROWS_AS(draw_chi_square(0.5, rng), std::domain_error);
}

TEST_CASE("chi-square draws average to their degrees of freedom") {
  RngStream rng(55);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += draw_chi_square(5, rng);
  CHECK(sum / n == doctest::Approx(5.0).epsilon(0.01));
  for (int i = 0; i < 1000; ++i) CHECK(draw_chi_square(1, rng) > 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "multimp/csv.hpp"
#include "multimp/dgp.hpp"
#include "multimp/linalg.hpp"

using namespace multimp;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_CASE("scenario 1 is the all-0.1 matrix and needs no repair") {
  const CorrelationScenario s = scenario(1);
  CHECK(s.rho_within == 0.1);
  CHECK(s.rho_between == 0.1);
  CHECK_FALSE(s.repaired);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      CHECK(s.matrix(i, j) == (i == j ? 1.0 : 0.1));
    }
  }
}

TEST_CASE("scenario 16 lowers the two cross-lag correlations to 0.66") {
  const CorrelationScenario s = scenario(16);
  CHECK_FALSE(s.repaired);
  CHECK(s.matrix(1, 2) == 0.66);  // y1-x2
  CHECK(s.matrix(0, 3) == 0.66);  // x1-y2
  CHECK(s.matrix(0, 1) == 0.7);
  CHECK(s.matrix(2, 3) == 0.7);
  CHECK(s.matrix(0, 2) == 0.7);
  CHECK(s.matrix(1, 3) == 0.7);
}

TEST_CASE("exactly scenarios 4 and 8 are repaired") {
  for (int id = 1; id <= kScenarioCount; ++id) {
    const CorrelationScenario s = scenario(id);
    CHECK(s.repaired == (id == 4 || id == 8));
    CHECK_NOTHROW(cholesky_lower(s.matrix));
    CHECK(is_symmetric(s.matrix));
    CHECK((s.matrix.diagonal().array() == 1.0).all());
  }
}

TEST_CASE("population truths reproduce the tabulated equal-correlation rows") {
  // rho_within == rho_between rows have published slope truths for b_y1
  CHECK(round2(population_truth(scenario(1)).coefficients(2)) == 0.08);
  CHECK(round2(population_truth(scenario(6)).coefficients(2)) == 0.19);
  CHECK(round2(population_truth(scenario(11)).coefficients(2)) == 0.25);
  CHECK(round2(population_truth(scenario(16)).coefficients(2)) == 0.35);
  CHECK(population_truth(scenario(16)).coefficients(1) == doctest::Approx(0.17).epsilon(1e-12));
}

TEST_CASE("population truths are exact solutions of the predictor system") {
  for (int id = 1; id <= kScenarioCount; ++id) {
    const CorrelationScenario s = scenario(id);
    const PopulationTruth truth = population_truth(s);
    CHECK(truth.coefficients(0) == 0.0);
    CHECK((truth.means.array() == 0.0).all());
    const Vector residual = s.matrix.topLeftCorner(3, 3) * truth.coefficients.tail(3) -
                            s.matrix.topRightCorner(3, 1);
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("a zero-correlation matrix gives zero slopes") {
  CorrelationScenario s = scenario(1);
  s.matrix = Matrix::Identity(4, 4);
  const PopulationTruth truth = population_truth(s);
  CHECK(truth.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generated data is complete, tagged by wave, and reproducible") {
  const CorrelationScenario s = scenario(3);
  RngStream rng(99, {1});
  const TwoWaveDataset d = generate(s, 425, rng);
  CHECK(d.rows() == 425);
  CHECK(d.cols() == 4);
  CHECK(d.all_observed());
  CHECK(d.schema().column(0).wave == Wave::t1);
  CHECK(d.schema().column(1).wave == Wave::t1);
  CHECK(d.schema().column(2).wave == Wave::t2);
  CHECK(d.schema().column(3).wave == Wave::t2);
  CHECK(d.schema().column(0).role == ColumnRole::always_observed);

  RngStream rng2(99, {1});
  const TwoWaveDataset again = generate(s, 425, rng2);
  CHECK((d.values() - again.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("large-sample regression on generated data recovers the truth") {
  const CorrelationScenario s = scenario(11);
  RngStream rng(2024, {7});
  const TwoWaveDataset d = generate(s, 1000000, rng);
  Matrix predictors(d.rows(), 3);
  predictors << d.values().col(0), d.values().col(1), d.values().col(2);
  const OlsFit fit = ols_fit(predictors, d.values().col(3), 0.0);
  for (Index j = 1; j <= 3; ++j) {
    CHECK(std::abs(fit.coefficients(j) - 0.25) < 0.01);
  }
}

TEST_CASE("scenario metadata export lists repairs and slope truths") {
  std::stringstream out;
  write_scenarios_csv(out);
  const CsvTable table = read_csv(out);
  REQUIRE(table.rows.size() == 16);
  CHECK(table.header == std::vector<std::string>{"scenario", "rho_within", "rho_between",
                                                 "repaired", "truth_b_x1", "truth_b_y1",
                                                 "truth_b_x2"});
  CHECK(table.rows[3][3] == "1");   // scenario 4 repaired
  CHECK(table.rows[7][3] == "1");   // scenario 8 repaired
  CHECK(table.rows[15][3] == "0");  // scenario 16 uses the lowered cross-lags instead
  CHECK(table.rows[15][1] == "0.7");
  CHECK(round2(std::stod(table.rows[15][5])) == 0.35);
}

#pragma once

#include <iosfwd>

#include "multimp/dataset.hpp"
#include "multimp/rng.hpp"
#include "multimp/types.hpp"

namespace multimp {

/// One of the 16 correlation scenarios of the simulation grid. `matrix` is
/// the 4x4 correlation matrix actually used for generation (column order
/// x1, y1, x2, y2); when the tabulated matrix is not positive definite it is
/// repaired and `repaired` is set.
struct CorrelationScenario {
  int id = 0;
  double rho_within = 0.0;
  double rho_between = 0.0;
  Matrix matrix;
  bool repaired = false;
};

inline constexpr int kScenarioCount = 16;

/// The correlation matrix exactly as tabulated, before any repair. Scenario
/// 16 uses 0.66 for the two cross-lag entries (rho_y1x2, rho_x1y2).
Matrix scenario_matrix_as_printed(int id);

/// Scenario with a positive definite generating matrix; repairs are applied
/// automatically and flagged, never silently.
CorrelationScenario scenario(int id);

/// Population quantities implied by the generating correlation matrix:
/// means are all zero; coefficients are (b0, b_x1, b_y1, b_x2) of the
/// regression of y2 on (x1, y1, x2), with b0 = 0 for standardized variables.
struct PopulationTruth {
  Vector means;         // 4 zeros
  Vector coefficients;  // b0, b_x1, b_y1, b_x2
};

/// Solve the 3x3 predictor system of the generating matrix. Exact: plugging
/// the coefficients back reproduces the cross-correlations to 1e-12.
PopulationTruth population_truth(const CorrelationScenario& s);

/// Schema of generated data: x1, y1 tagged t1 and x2, y2 tagged t2, with x1
/// always observed and the rest incomplete-eligible.
WaveSchema simulation_schema();

/// n fully observed draws from N(0, s.matrix).
TwoWaveDataset generate(const CorrelationScenario& s, Index n, RngStream& rng);

/// Scenario metadata: id, rho_within, rho_between, repaired, and the derived
/// slope truths.
void write_scenarios_csv(std::ostream& out);

}  // namespace multimp

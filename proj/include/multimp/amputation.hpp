#pragma once

#include <string>
#include <vector>

#include "multimp/dataset.hpp"
#include "multimp/rng.hpp"

namespace multimp {

/// How "each combination of missing values has the same probability" is
/// read. The default gives every incomplete pattern the same probability and
/// solves the complete-pattern mass from the target cell rate; the alternate
/// reading spreads mass equally over all patterns including the complete one
/// (which fixes the cell rate implied by the pattern set instead).
enum class PatternProbabilityReading { equal_incomplete_only, equal_all_patterns };

struct AmputationPlan {
  MissingnessKind kind = MissingnessKind::monotone;
  std::vector<MissingnessPattern> incomplete_patterns;
  double per_pattern_probability = 0.0;
  double complete_probability = 1.0;

  std::string describe() const;
};

/// Solve the per-pattern probability so the expected fraction of missing
/// cells equals target_cell_rate. Throws UnreachableTarget when the rate
/// exceeds what the pattern set can produce.
AmputationPlan calibrate(
    MissingnessKind kind, double target_cell_rate,
    PatternProbabilityReading reading = PatternProbabilityReading::equal_incomplete_only);

/// Assign each row one pattern (single uniform draw against cumulative
/// probabilities, complete pattern first) and mask its cells accordingly.
/// Pattern columns are matched to dataset columns by name. x1 is never
/// masked. Input must be fully observed.
TwoWaveDataset amputate(const TwoWaveDataset& d, const AmputationPlan& plan, RngStream& rng);

}  // namespace multimp

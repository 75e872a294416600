#pragma once

#include <string>

#include "multimp/dataset.hpp"
#include "multimp/imputer.hpp"
#include "multimp/rng.hpp"

namespace multimp {

enum class StrategyKind { reimpute, nested, appended };

std::string to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& name);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::reimpute;
  int m = 5;        // re-imputation chains
  int m1 = 5;       // first-stage chains (nested/appended)
  int m2 = 5;       // per-nest chains; appended forces 1
  ImputeMethod method = ImputeMethod::norm;
  int iterations = kDefaultSweeps;
  int pmm_donors = kDefaultPmmDonors;
};

/// Normalizes (appended => m2 = 1) and validates (nested => m2 >= 2).
StrategyConfig validated(StrategyConfig cfg);

/// Imputation plan for re-imputation: every column with missing cells is a
/// target; every other column of either wave is a predictor.
ImputationSpec build_reimpute_spec(const TwoWaveDataset& d, const StrategyConfig& cfg);

/// Stage-1 plan of the staged strategies: t1 targets, t1 predictors only.
ImputationSpec build_stage1_spec(const TwoWaveDataset& t1, const StrategyConfig& cfg);

/// Stage-2 plan: t2 targets; predictors are all other columns, the now
/// complete t1 pair plus the other t2 column.
ImputationSpec build_stage2_spec(const TwoWaveDataset& merged, const StrategyConfig& cfg);

/// Discard-and-redo strategy: one chained imputation over the combined
/// waves, m chains, flat(m) result.
CompletedCollection run_reimpute(const TwoWaveDataset& d, const StrategyConfig& cfg,
                                 const RngStream& rng);

/// Keep-stage-1 strategies. Stage 1 imputes the t1 block alone (m1 chains,
/// blind to t2 by construction); stage 2 merges each completed t1 with the
/// original incomplete t2 block and imputes the t2 targets m2 times per
/// nest. Streams: stage 1 chains under rng.child(1), stage-2 nest k under
/// rng.child(2).child(k), which makes the appended run reproduce member
/// (k, 0) of the nested run exactly. Result shape: nested(m1, m2), or
/// flat(m1) when m2 == 1 (appended).
CompletedCollection run_staged(const TwoWaveDataset& d, const StrategyConfig& cfg,
                               const RngStream& rng);

CompletedCollection run_strategy(const TwoWaveDataset& d, const StrategyConfig& cfg,
                                 const RngStream& rng);

}  // namespace multimp

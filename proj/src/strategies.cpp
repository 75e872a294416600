#include "multimp/strategies.hpp"

#include <stdexcept>

namespace multimp {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::reimpute: return "reimpute";
    case StrategyKind::nested: return "nested";
    case StrategyKind::appended: return "appended";
  }
  return "?";
}

StrategyKind strategy_from_string(const std::string& name) {
  if (name == "reimpute") return StrategyKind::reimpute;
  if (name == "nested") return StrategyKind::nested;
  if (name == "appended") return StrategyKind::appended;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

StrategyConfig validated(StrategyConfig cfg) {
  if (cfg.m < 1 || cfg.m1 < 1 || cfg.m2 < 1) {
    throw std::invalid_argument("strategy: m, m1, m2 must be positive");
  }
  if (cfg.kind == StrategyKind::appended) cfg.m2 = 1;
  if (cfg.kind == StrategyKind::nested && cfg.m2 < 2) {
    throw std::invalid_argument("strategy: nested imputation needs m2 >= 2");
  }
  return cfg;
}

namespace {

ImputationSpec spec_for(const TwoWaveDataset& d, const std::vector<Index>& target_cols,
                        const std::vector<Index>& predictor_pool, const StrategyConfig& cfg,
                        int chains) {
  ImputationSpec spec;
  spec.iterations = cfg.iterations;
  spec.m = chains;
  spec.pmm_donors = cfg.pmm_donors;
  for (Index col : target_cols) {
    if (d.mask().col(col).all()) continue;  // nothing to do for this column
    ImputationSpec::Target target;
    target.name = d.schema().column(col).name;
    target.method = cfg.method;
    for (Index pred : predictor_pool) {
      if (pred != col) target.predictors.push_back(d.schema().column(pred).name);
    }
    spec.targets.push_back(std::move(target));
  }
  return spec;
}

std::vector<Index> all_columns(const TwoWaveDataset& d) {
  std::vector<Index> cols(static_cast<size_t>(d.cols()));
  for (Index i = 0; i < d.cols(); ++i) cols[static_cast<size_t>(i)] = i;
  return cols;
}

}  // namespace

ImputationSpec build_reimpute_spec(const TwoWaveDataset& d, const StrategyConfig& cfg) {
  return spec_for(d, all_columns(d), all_columns(d), cfg, cfg.m);
}

ImputationSpec build_stage1_spec(const TwoWaveDataset& t1, const StrategyConfig& cfg) {
  return spec_for(t1, all_columns(t1), all_columns(t1), cfg, cfg.m1);
}

ImputationSpec build_stage2_spec(const TwoWaveDataset& merged, const StrategyConfig& cfg) {
  return spec_for(merged, merged.schema().wave_columns(Wave::t2), all_columns(merged), cfg,
                  cfg.m2);
}

CompletedCollection run_reimpute(const TwoWaveDataset& d, const StrategyConfig& raw,
                                 const RngStream& rng) {
  const StrategyConfig cfg = validated(raw);
  return chained_impute(d, build_reimpute_spec(d, cfg), rng);
}

CompletedCollection run_staged(const TwoWaveDataset& d, const StrategyConfig& raw,
                               const RngStream& rng) {
  const StrategyConfig cfg = validated(raw);
  auto [t1, t2] = split_waves(d);

  const CompletedCollection stage1 =
      chained_impute(t1, build_stage1_spec(t1, cfg), rng.child(1));

  CompletedCollection out;
  out.shape = cfg.m2 == 1 ? CompletedCollection::Shape::flat : CompletedCollection::Shape::nested;
  out.m1 = cfg.m1;
  out.m2 = cfg.m2;
  out.datasets.reserve(static_cast<size_t>(cfg.m1 * cfg.m2));

  const RngStream stage2_base = rng.child(2);
  for (int nest = 0; nest < cfg.m1; ++nest) {
    const TwoWaveDataset merged =
        merge_waves(stage1.datasets[static_cast<size_t>(nest)], t2);
    CompletedCollection completed = chained_impute(
        merged, build_stage2_spec(merged, cfg), stage2_base.child(static_cast<std::uint64_t>(nest)));
    for (auto& dataset : completed.datasets) {
      out.datasets.push_back(std::move(dataset));
    }
  }
  return out;
}

CompletedCollection run_strategy(const TwoWaveDataset& d, const StrategyConfig& cfg,
                                 const RngStream& rng) {
  return cfg.kind == StrategyKind::reimpute ? run_reimpute(d, cfg, rng)
                                            : run_staged(d, cfg, rng);
}

}  // namespace multimp

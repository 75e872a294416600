#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "multimp/dataset.hpp"
#include "multimp/dgp.hpp"
#include "multimp/pooling.hpp"
#include "multimp/strategies.hpp"

namespace multimp {

/// The eight quantities tracked per replication: the coefficients of the
/// analysis regression y2 ~ x1 + y1 + x2 and the four variable means.
enum class Parameter : int {
  b0, b_x1, b_y1, b_x2, mu_x1, mu_y1, mu_x2, mu_y2
};

inline constexpr int kParameterCount = 8;
inline constexpr std::array<Parameter, kParameterCount> kAllParameters = {
    Parameter::b0,    Parameter::b_x1,  Parameter::b_y1,  Parameter::b_x2,
    Parameter::mu_x1, Parameter::mu_y1, Parameter::mu_x2, Parameter::mu_y2};

std::string to_string(Parameter p);
bool is_coefficient(Parameter p);

struct EstimateVariance {
  double estimate = 0.0;
  double variance = 0.0;
};

/// Complete-data estimates for all eight parameters: OLS with intercept for
/// the coefficients (variances sigma^2 diag((X^T X)^-1)) and column means
/// with variances s^2 / n.
std::array<EstimateVariance, kParameterCount> fit_analysis(const TwoWaveDataset& d);

struct ReplicationResult {
  std::array<PooledResult, kParameterCount> pooled;
};

struct CellSpec {
  int scenario_id = 1;
  MissingnessKind kind = MissingnessKind::monotone;
  StrategyConfig strategy;
  int replications = 500;
  Index n = 425;
  std::uint64_t master_seed = 0;
  double target_missing_rate = 0.2;
};

struct CellResult {
  CellSpec spec;
  std::vector<ReplicationResult> replications;  // failures excluded
  int failures = 0;
};

/// Run one (scenario, missingness, strategy) cell: generate, amputate, run
/// the strategy, fit the analysis model on every completed dataset, and pool
/// (flat rules for re-imputation and appended, nested rules for nested).
///
/// Stream paths are (seed; scenario, missingness, replication, purpose
/// [, strategy]) with purpose 0 = generate, 1 = amputate, 2 = strategy, so
/// every strategy sees identical incomplete data within a replication and
/// results do not depend on the thread count.
CellResult run_cell(const CellSpec& spec, int threads = 1);

struct SummaryRow {
  int scenario_id = 0;
  MissingnessKind kind = MissingnessKind::monotone;
  StrategyKind strategy = StrategyKind::reimpute;
  Parameter parameter = Parameter::b0;
  double truth = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
  double coverage_pct = 0.0;
  double mean_ci_width = 0.0;
  int replications = 0;
  int failures = 0;
};

/// Bias, coverage and mean interval width against the population truths of
/// the cell's generating matrix.
std::vector<SummaryRow> summarize(const CellResult& cell);

/// Mean interval width of `a` relative to `b`; both rows must be the same
/// parameter of the same (scenario, missingness) cell.
double relative_efficiency(const SummaryRow& a, const SummaryRow& b);

/// Validity and efficiency thresholds applied to whatever cells are present
/// in a summary (the `--check` logic). Returns one message per violation.
std::vector<std::string> check_summary_thresholds(const std::vector<SummaryRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Long-format bias/coverage grid keyed by (rho_within, rho_between) for
/// external plotting.
void write_correlation_grid_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Run fn(0..count-1) on `threads` workers, striding so that results can be
/// written into per-index slots; output never depends on the thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace multimp

#include "multimp/amputation.hpp"

#include <sstream>
#include <stdexcept>

#include "multimp/csv.hpp"

namespace multimp {

std::string AmputationPlan::describe() const {
  std::ostringstream out;
  out << to_string(kind) << " plan: complete pattern p=" << format_double(complete_probability, 6)
      << ", " << incomplete_patterns.size() << " incomplete patterns p="
      << format_double(per_pattern_probability, 6) << " each\n";
  const auto& names = simulation_column_names();
  for (const auto& pattern : incomplete_patterns) {
    out << " ";
    for (size_t j = 0; j < pattern.observed.size(); ++j) {
      out << ' ' << names[j] << '=' << (pattern.observed[j] ? '1' : '0');
    }
    out << '\n';
  }
  return out.str();
}

AmputationPlan calibrate(MissingnessKind kind, double target_cell_rate,
                         PatternProbabilityReading reading) {
  if (target_cell_rate < 0.0 || target_cell_rate >= 1.0) {
    throw std::invalid_argument("calibrate: target cell rate must lie in [0, 1)");
  }
  const auto& table = pattern_table(kind);

  AmputationPlan plan;
  plan.kind = kind;
  int total_missing_cells = 0;
  for (const auto& pattern : table) {
    if (pattern.missing_count() > 0) {
      plan.incomplete_patterns.push_back(pattern);
      total_missing_cells += pattern.missing_count();
    }
  }
  const auto k = static_cast<double>(plan.incomplete_patterns.size());
  const auto p_cols = static_cast<double>(table.front().observed.size());

  if (reading == PatternProbabilityReading::equal_all_patterns) {
    plan.per_pattern_probability = 1.0 / (k + 1.0);
    plan.complete_probability = 1.0 / (k + 1.0);
    return plan;
  }

  if (target_cell_rate == 0.0) {
    plan.per_pattern_probability = 0.0;
    plan.complete_probability = 1.0;
    return plan;
  }

  // p * (sum of missing cells over incomplete patterns) / p_cols = rate
  const double p = target_cell_rate * p_cols / static_cast<double>(total_missing_cells);
  if (p * k > 1.0 + 1e-12) {
    throw UnreachableTarget("calibrate: cell rate " + format_double(target_cell_rate, 6) +
                            " exceeds the maximum " +
                            format_double(total_missing_cells / (p_cols * k), 6) +
                            " reachable with this pattern set");
  }
  plan.per_pattern_probability = p;
  plan.complete_probability = 1.0 - p * k;
  return plan;
}

TwoWaveDataset amputate(const TwoWaveDataset& d, const AmputationPlan& plan, RngStream& rng) {
  if (!d.all_observed()) {
    throw std::invalid_argument("amputate: input must be fully observed");
  }
  const auto& names = simulation_column_names();
  for (const auto& pattern : plan.incomplete_patterns) {
    if (pattern.observed.size() != names.size()) {
      throw std::invalid_argument("amputate: pattern width does not match the simulation columns");
    }
  }
  std::vector<Index> cols(names.size());
  for (size_t j = 0; j < names.size(); ++j) {
    cols[j] = d.schema().index_of(names[j]);
  }

  BoolArray mask = d.mask();
  for (Index row = 0; row < d.rows(); ++row) {
    double u = rng.uniform() - plan.complete_probability;
    if (u < 0.0) continue;
    for (const auto& pattern : plan.incomplete_patterns) {
      u -= plan.per_pattern_probability;
      if (u < 0.0) {
        for (size_t j = 0; j < pattern.observed.size(); ++j) {
          if (!pattern.observed[j]) mask(row, cols[j]) = false;
        }
        break;
      }
    }
    // u still >= 0 only through rounding at the very top of the unit
    // interval; the row stays complete.
  }
  return TwoWaveDataset(d.schema(), d.values(), std::move(mask));
}

}  // namespace multimp

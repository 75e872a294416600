#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multimp/types.hpp"

namespace multimp {

enum class Wave { t1, t2 };
enum class ColumnRole { always_observed, incomplete };

struct ColumnSpec {
  std::string name;
  Wave wave = Wave::t1;
  ColumnRole role = ColumnRole::always_observed;
};

/// Ordered column layout of a two-wave dataset. Names are unique; column
/// order is schema order everywhere.
class WaveSchema {
 public:
  WaveSchema() = default;
  explicit WaveSchema(std::vector<ColumnSpec> columns);

  Index size() const { return static_cast<Index>(columns_.size()); }
  const ColumnSpec& column(Index i) const { return columns_.at(static_cast<size_t>(i)); }
  const std::vector<ColumnSpec>& columns() const { return columns_; }

  /// Index of a named column; throws std::out_of_range when absent.
  Index index_of(const std::string& name) const;
  bool contains(const std::string& name) const;

  std::vector<Index> wave_columns(Wave wave) const;

 private:
  std::vector<ColumnSpec> columns_;
};

/// Rectangular numeric data with a per-cell observed mask. Missing cells are
/// tracked by the mask, not by a sentinel; their stored values are poisoned
/// with NaN so that accidental reads surface in results. Datasets are
/// immutable after construction.
class TwoWaveDataset {
 public:
  TwoWaveDataset(WaveSchema schema, Matrix values, BoolArray mask);

  static TwoWaveDataset fully_observed(WaveSchema schema, Matrix values);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const WaveSchema& schema() const { return schema_; }

  bool observed(Index row, Index col) const { return mask_(row, col); }

  /// Checked read; throws MissingCellRead on a masked cell.
  double at(Index row, Index col) const;

  const Matrix& values() const { return values_; }
  const BoolArray& mask() const { return mask_; }

  bool all_observed() const { return mask_.all(); }
  Index missing_count() const;

 private:
  WaveSchema schema_;
  Matrix values_;
  BoolArray mask_;
};

/// Fraction of masked-out cells over all n x p cells.
double missing_cell_fraction(const TwoWaveDataset& d);

/// Split into the t1-column and t2-column datasets (schema order preserved).
std::pair<TwoWaveDataset, TwoWaveDataset> split_waves(const TwoWaveDataset& d);

/// Inverse of split_waves; merge(split(d)) == d exactly (values and mask).
/// Throws std::invalid_argument on a row-count mismatch or duplicated names.
TwoWaveDataset merge_waves(const TwoWaveDataset& t1, const TwoWaveDataset& t2);

/// True when the two datasets have equal masks and bitwise-equal values on
/// every observed cell (masked cells are ignored; they carry no information).
bool same_observed_content(const TwoWaveDataset& a, const TwoWaveDataset& b);

/// Collection of completed copies of one dataset: flat (m datasets) or
/// two-level nested (m1 nests of m2). Nested members are stored row-major,
/// member (k, l) at index k * m2 + l.
struct CompletedCollection {
  enum class Shape { flat, nested };

  Shape shape = Shape::flat;
  int m1 = 0;
  int m2 = 1;
  std::vector<TwoWaveDataset> datasets;

  int total() const { return static_cast<int>(datasets.size()); }
  const TwoWaveDataset& at(int nest, int member) const;
};

enum class MissingnessKind { monotone, nonmonotone };

std::string to_string(MissingnessKind kind);

/// One row of the pattern table: observed flag per simulation column.
struct MissingnessPattern {
  std::vector<bool> observed;

  int missing_count() const;
  bool matches(const BoolArray& mask, Index row) const;
};

/// Column names of the simulation schema, in order: x1, y1 (wave t1) and
/// x2, y2 (wave t2).
const std::vector<std::string>& simulation_column_names();

/// The fixed pattern table for a missingness kind, complete pattern first:
/// 5 patterns for monotone, 8 for non-monotone.
const std::vector<MissingnessPattern>& pattern_table(MissingnessKind kind);

}  // namespace multimp

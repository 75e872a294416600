#include "multimp/dataset.hpp"

#include <limits>
#include <set>
#include <stdexcept>

namespace multimp {

WaveSchema::WaveSchema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  std::set<std::string> seen;
  for (const auto& col : columns_) {
    if (col.name.empty()) {
      throw std::invalid_argument("WaveSchema: column names must be non-empty");
    }
    if (!seen.insert(col.name).second) {
      throw std::invalid_argument("WaveSchema: duplicate column name '" + col.name + "'");
    }
  }
}

Index WaveSchema::index_of(const std::string& name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return static_cast<Index>(i);
  }
  throw std::out_of_range("WaveSchema: no column named '" + name + "'");
}

bool WaveSchema::contains(const std::string& name) const {
  for (const auto& col : columns_) {
    if (col.name == name) return true;
  }
  return false;
}

std::vector<Index> WaveSchema::wave_columns(Wave wave) const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    if (columns_[static_cast<size_t>(i)].wave == wave) out.push_back(i);
  }
  return out;
}

TwoWaveDataset::TwoWaveDataset(WaveSchema schema, Matrix values, BoolArray mask)
    : schema_(std::move(schema)), values_(std::move(values)), mask_(std::move(mask)) {
  if (values_.rows() < 1) {
    throw std::invalid_argument("TwoWaveDataset: need at least one row");
  }
  if (values_.cols() != schema_.size()) {
    throw std::invalid_argument("TwoWaveDataset: value columns must match schema");
  }
  if (mask_.rows() != values_.rows() || mask_.cols() != values_.cols()) {
    throw std::invalid_argument("TwoWaveDataset: mask shape must match values");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Index j = 0; j < values_.cols(); ++j) {
    for (Index i = 0; i < values_.rows(); ++i) {
      if (!mask_(i, j)) values_(i, j) = nan;
    }
  }
}

TwoWaveDataset TwoWaveDataset::fully_observed(WaveSchema schema, Matrix values) {
  BoolArray mask = BoolArray::Constant(values.rows(), values.cols(), true);
  return TwoWaveDataset(std::move(schema), std::move(values), std::move(mask));
}

double TwoWaveDataset::at(Index row, Index col) const {
  if (!mask_(row, col)) {
    throw MissingCellRead("TwoWaveDataset: read of missing cell (" + std::to_string(row) +
                          ", " + std::to_string(col) + ")");
  }
  return values_(row, col);
}

Index TwoWaveDataset::missing_count() const {
  return static_cast<Index>((!mask_).count());
}

double missing_cell_fraction(const TwoWaveDataset& d) {
  const auto total = static_cast<double>(d.rows() * d.cols());
  return static_cast<double>(d.missing_count()) / total;
}

namespace {

TwoWaveDataset take_columns(const TwoWaveDataset& d, const std::vector<Index>& cols) {
  std::vector<ColumnSpec> specs;
  specs.reserve(cols.size());
  Matrix values(d.rows(), static_cast<Index>(cols.size()));
  BoolArray mask(d.rows(), static_cast<Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    specs.push_back(d.schema().column(cols[j]));
    values.col(static_cast<Index>(j)) = d.values().col(cols[j]);
    mask.col(static_cast<Index>(j)) = d.mask().col(cols[j]);
  }
  return TwoWaveDataset(WaveSchema(std::move(specs)), std::move(values), std::move(mask));
}

}  // namespace

std::pair<TwoWaveDataset, TwoWaveDataset> split_waves(const TwoWaveDataset& d) {
  const auto t1_cols = d.schema().wave_columns(Wave::t1);
  const auto t2_cols = d.schema().wave_columns(Wave::t2);
  if (t1_cols.empty() || t2_cols.empty()) {
    throw std::invalid_argument("split_waves: both waves must be present");
  }
  return {take_columns(d, t1_cols), take_columns(d, t2_cols)};
}

TwoWaveDataset merge_waves(const TwoWaveDataset& t1, const TwoWaveDataset& t2) {
  if (t1.rows() != t2.rows()) {
    throw std::invalid_argument("merge_waves: row counts differ");
  }
  std::vector<ColumnSpec> specs = t1.schema().columns();
  for (const auto& col : t2.schema().columns()) {
    if (t1.schema().contains(col.name)) {
      throw std::invalid_argument("merge_waves: duplicate column '" + col.name + "'");
    }
    specs.push_back(col);
  }
  Matrix values(t1.rows(), t1.cols() + t2.cols());
  values.leftCols(t1.cols()) = t1.values();
  values.rightCols(t2.cols()) = t2.values();
  BoolArray mask(t1.rows(), t1.cols() + t2.cols());
  mask.leftCols(t1.cols()) = t1.mask();
  mask.rightCols(t2.cols()) = t2.mask();
  return TwoWaveDataset(WaveSchema(std::move(specs)), std::move(values), std::move(mask));
}

bool same_observed_content(const TwoWaveDataset& a, const TwoWaveDataset& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (!(a.mask() == b.mask()).all()) return false;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a.mask()(i, j) && a.values()(i, j) != b.values()(i, j)) return false;
    }
  }
  return true;
}

const TwoWaveDataset& CompletedCollection::at(int nest, int member) const {
  if (shape == Shape::flat) {
    if (member != 0) throw std::out_of_range("CompletedCollection: flat collection");
    return datasets.at(static_cast<size_t>(nest));
  }
  return datasets.at(static_cast<size_t>(nest * m2 + member));
}

std::string to_string(MissingnessKind kind) {
  return kind == MissingnessKind::monotone ? "monotone" : "nonmonotone";
}

int MissingnessPattern::missing_count() const {
  int count = 0;
  for (bool flag : observed) {
    if (!flag) ++count;
  }
  return count;
}

bool MissingnessPattern::matches(const BoolArray& mask, Index row) const {
  if (static_cast<size_t>(mask.cols()) != observed.size()) return false;
  for (Index j = 0; j < mask.cols(); ++j) {
    if (mask(row, j) != observed[static_cast<size_t>(j)]) return false;
  }
  return true;
}

const std::vector<std::string>& simulation_column_names() {
  static const std::vector<std::string> names = {"x1", "y1", "x2", "y2"};
  return names;
}

const std::vector<MissingnessPattern>& pattern_table(MissingnessKind kind) {
  // Observed flags in column order x1, y1, x2, y2; complete pattern first.
  static const std::vector<MissingnessPattern> monotone = {
      {{true, true, true, true}},
      {{true, true, true, false}},
      {{true, true, false, true}},
      {{true, true, false, false}},
      {{true, false, false, false}},
  };
  static const std::vector<MissingnessPattern> nonmonotone = {
      {{true, true, true, true}},
      {{true, true, true, false}},
      {{true, true, false, true}},
      {{true, true, false, false}},
      {{true, false, false, false}},
      {{true, false, true, true}},
      {{true, false, true, false}},
      {{true, false, false, true}},
  };
  return kind == MissingnessKind::monotone ? monotone : nonmonotone;
}

}  // namespace multimp

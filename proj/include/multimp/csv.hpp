#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "multimp/dataset.hpp"

namespace multimp {

/// Fixed-format double rendering used for all CSV output, so that identical
/// computations always serialize to identical bytes. Non-finite values render
/// as "inf", "-inf", "nan".
std::string format_double(double v, int precision = 10);

/// Raw CSV table: a header row plus string cells. No quoting; the formats
/// this tool reads and writes never contain commas inside fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<size_t> column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Dataset CSV: header row required, missing cells written as the literal
/// token NA, decimal point '.', UTF-8.
void write_dataset_csv(std::ostream& out, const TwoWaveDataset& d);
void write_dataset_csv_file(const std::string& path, const TwoWaveDataset& d);

/// Read a dataset whose columns are described by `schema`; the CSV header
/// must contain every schema column (extra columns are rejected).
TwoWaveDataset read_dataset_csv(std::istream& in, const WaveSchema& schema);
TwoWaveDataset read_dataset_csv_file(const std::string& path, const WaveSchema& schema);

}  // namespace multimp

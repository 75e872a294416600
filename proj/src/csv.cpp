#include "multimp/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace multimp {

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::optional<size_t> CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_csv: missing header row");
  }
  table.header = split_line(strip_cr(line));
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("read_csv: row has " + std::to_string(fields.size()) +
                               " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_csv(out, table);
}

void write_dataset_csv(std::ostream& out, const TwoWaveDataset& d) {
  for (Index j = 0; j < d.cols(); ++j) {
    if (j) out << ',';
    out << d.schema().column(j).name;
  }
  out << '\n';
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) {
      if (j) out << ',';
      if (d.observed(i, j)) {
        out << format_double(d.values()(i, j), 17);
      } else {
        out << "NA";
      }
    }
    out << '\n';
  }
}

void write_dataset_csv_file(const std::string& path, const TwoWaveDataset& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_dataset_csv(out, d);
}

TwoWaveDataset read_dataset_csv(std::istream& in, const WaveSchema& schema) {
  const CsvTable table = read_csv(in);
  if (table.rows.empty()) {
    throw std::runtime_error("read_dataset_csv: no data rows");
  }
  std::vector<size_t> csv_col(static_cast<size_t>(schema.size()));
  for (Index j = 0; j < schema.size(); ++j) {
    auto pos = table.column(schema.column(j).name);
    if (!pos) {
      throw std::runtime_error("read_dataset_csv: column '" + schema.column(j).name +
                               "' not found in CSV header");
    }
    csv_col[static_cast<size_t>(j)] = *pos;
  }
  if (table.header.size() != static_cast<size_t>(schema.size())) {
    throw std::runtime_error("read_dataset_csv: CSV has columns not covered by the schema");
  }

  const Index n = static_cast<Index>(table.rows.size());
  Matrix values(n, schema.size());
  BoolArray mask(n, schema.size());
  for (Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    for (Index j = 0; j < schema.size(); ++j) {
      const std::string& cell = row[csv_col[static_cast<size_t>(j)]];
      if (cell == "NA") {
        mask(i, j) = false;
        values(i, j) = std::numeric_limits<double>::quiet_NaN();
      } else {
        mask(i, j) = true;
        try {
          size_t used = 0;
          values(i, j) = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw std::runtime_error("read_dataset_csv: cannot parse '" + cell + "' at row " +
                                   std::to_string(i + 2) + ", column '" +
                                   schema.column(j).name + "'");
        }
      }
    }
  }
  return TwoWaveDataset(schema, std::move(values), std::move(mask));
}

TwoWaveDataset read_dataset_csv_file(const std::string& path, const WaveSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_dataset_csv(in, schema);
}

}  // namespace multimp

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "ir2/matrix.hpp"

namespace ir2 {

/// Raw CSV content: header plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 reader: comma delimiter, double-quote quoting, CRLF or LF line
/// ends, header row required. Throws InputError on ragged rows or bad quoting.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Designated numeric columns of a table.
struct Dataset {
  std::vector<std::string> column_names;  // y first, then x columns
  Matrix values;                          // n x (1 + p)
  std::string y_column;
  std::vector<std::string> x_columns;
  std::size_t dropped_rows = 0;

  Sample to_sample() const;
};

struct IngestOptions {
  /// Listwise deletion of rows with missing cells in designated columns.
  /// Otherwise such rows are an error.
  bool drop_missing = false;
};

/// Parses designated columns as numbers ('.' decimal point). Empty cells and
/// NA/NaN/null tokens count as missing. Requires n >= 3 after ingestion.
Dataset ingest(const CsvTable& table, const std::string& y_column,
               const std::vector<std::string>& x_columns, const IngestOptions& options = {});

}  // namespace ir2

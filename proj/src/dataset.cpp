#include "ir2/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

#include "ir2/error.hpp"

namespace ir2 {

namespace {

std::vector<std::vector<std::string>> split_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // Skip blank lines.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (in_quotes) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          throw InputError("CSV line " + std::to_string(line) + ": stray quote inside field");
        }
        in_quotes = true;
        field_started = true;
        was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (k + 1 < text.size() && text[k + 1] == '\n') break;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (was_quoted) {
          throw InputError("CSV line " + std::to_string(line) + ": text after closing quote");
        }
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw InputError("CSV: unterminated quoted field");
  if (field_started || !record.empty()) end_record();
  return records;
}

bool is_missing_token(const std::string& s) {
  std::string t;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return t.empty() || t == "na" || t == "nan" || t == "null";
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  if (first < last && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InputError("row " + std::to_string(row + 1) + ", column '" + column +
                     "': not a finite number: '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto records = split_records(text);
  if (records.empty()) throw InputError("CSV input has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw InputError("CSV row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                       " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in);
}

Sample Dataset::to_sample() const {
  Sample s;
  const std::size_t n = values.rows();
  const std::size_t p = x_columns.size();
  s.y.resize(n);
  s.x = Matrix(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    s.y[i] = values(i, 0);
    for (std::size_t c = 0; c < p; ++c) s.x(i, c) = values(i, c + 1);
  }
  s.x_names = x_columns;
  return s;
}

Dataset ingest(const CsvTable& table, const std::string& y_column,
               const std::vector<std::string>& x_columns, const IngestOptions& options) {
  if (x_columns.empty()) throw InputError("at least one x column is required");
  std::vector<std::string> names{y_column};
  names.insert(names.end(), x_columns.begin(), x_columns.end());

  std::vector<std::size_t> index;
  for (const auto& name : names) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw InputError("no column named '" + name + "'");
    index.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  for (std::size_t a = 0; a < names.size(); ++a) {
    for (std::size_t b = a + 1; b < names.size(); ++b) {
      if (names[a] == names[b]) throw InputError("column '" + names[a] + "' designated twice");
    }
  }

  Dataset ds;
  ds.column_names = names;
  ds.y_column = y_column;
  ds.x_columns = x_columns;
  std::vector<double> data;
  data.reserve(table.rows.size() * names.size());
  std::size_t kept = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    bool missing = false;
    for (std::size_t k = 0; k < index.size() && !missing; ++k) {
      if (is_missing_token(row[index[k]])) {
        if (!options.drop_missing) {
          throw InputError("row " + std::to_string(r + 1) + ", column '" + names[k] +
                           "' is missing (use row dropping to skip it)");
        }
        missing = true;
      }
    }
    if (missing) {
      ++ds.dropped_rows;
      continue;
    }
    for (std::size_t k = 0; k < index.size(); ++k) {
      data.push_back(parse_number(row[index[k]], r, names[k]));
    }
    ++kept;
  }
  if (kept < 3) {
    throw InsufficientSampleError("need at least 3 complete rows, got " + std::to_string(kept));
  }
  ds.values = Matrix(kept, names.size(), std::move(data));
  return ds;
}

}  // namespace ir2

#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ir2 {

/// One metric of one experimental cell (long format).
struct ReportRow {
  std::string model;
  std::size_t n = 0;
  double param = 0.0;  // lambda or noise level
  std::string method;
  std::string metric;
  double value = 0.0;
  double mc_se = 0.0;
  std::size_t reps = 1;
  std::string note;
};

struct ExperimentReport {
  std::string study;
  std::vector<ReportRow> rows;

  /// Rows with reps == 1 get note "single_replicate" and mc_se 0.
  void add(ReportRow row);
  /// First row matching model/method/metric (and param when given); throws if absent.
  const ReportRow& find(std::string_view model, std::string_view method, std::string_view metric) const;
};

/// Column order of both output formats.
inline constexpr std::string_view kReportColumns[] = {
    "study", "model", "n", "param", "method", "metric", "value", "mc_se", "reps", "note"};

/// RFC 4180 field quoting.
std::string csv_escape(std::string_view field);

void write_csv(const ExperimentReport& report, std::ostream& out);
void write_jsonl(const ExperimentReport& report, std::ostream& out);

}  // namespace ir2

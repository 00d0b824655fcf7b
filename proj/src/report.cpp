#include "ir2/report.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace ir2 {

void ExperimentReport::add(ReportRow row) {
  if (row.reps <= 1) {
    row.reps = 1;
    row.mc_se = 0.0;
    if (row.note.empty()) row.note = "single_replicate";
  }
  rows.push_back(std::move(row));
}

const ReportRow& ExperimentReport::find(std::string_view model, std::string_view method,
                                        std::string_view metric) const {
  for (const auto& r : rows) {
    if (r.model == model && r.method == method && r.metric == metric) return r;
  }
  throw std::out_of_range("report has no row " + std::string(model) + "/" + std::string(method) +
                          "/" + std::string(metric));
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const ExperimentReport& report, std::ostream& out) {
  bool first = true;
  for (auto column : kReportColumns) {
    if (!first) out << ',';
    out << column;
    first = false;
  }
  out << "\r\n";
  for (const auto& r : report.rows) {
    out << csv_escape(report.study) << ',' << csv_escape(r.model) << ',' << r.n << ','
        << format_number(r.param) << ',' << csv_escape(r.method) << ',' << csv_escape(r.metric)
        << ',' << format_number(r.value) << ',' << format_number(r.mc_se) << ',' << r.reps << ','
        << csv_escape(r.note) << "\r\n";
  }
}

void write_jsonl(const ExperimentReport& report, std::ostream& out) {
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["study"] = report.study;
    j["model"] = r.model;
    j["n"] = r.n;
    j["param"] = r.param;
    j["method"] = r.method;
    j["metric"] = r.metric;
    j["value"] = r.value;
    j["mc_se"] = r.mc_se;
    j["reps"] = r.reps;
    j["note"] = r.note;
    out << j.dump() << '\n';
  }
}

}  // namespace ir2

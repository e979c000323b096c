#include "cctune/report.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace cctune {

ReportRow row_from(const Prediction& prediction) {
  ReportRow row;
  row.operation = operation_of(prediction.strategy);
  row.strategy = std::string(name_of(prediction.strategy));
  row.nprocs = prediction.nprocs;
  row.message_size = prediction.message_size;
  if (prediction.segment) {
    row.segment_size = prediction.segment->segment_size;
    row.segment_count = prediction.segment->segment_count;
  }
  row.predicted_s = prediction.time;
  row.is_upper_bound = prediction.is_upper_bound;
  return row;
}

ReportRow row_from(const ValidationRecord& record) {
  ReportRow row = row_from(record.prediction);
  row.simulated_s = record.simulated;
  row.abs_error = record.abs_error;
  row.rel_error = record.rel_error;
  row.bound_respected = record.bound_respected;
  return row;
}

std::string format_duration(Seconds seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", seconds);
  return buf;
}

namespace {

using ordered_json = nlohmann::ordered_json;

void write_csv(std::ostream& os, std::span<const ReportRow> rows,
               bool validation_columns) {
  os << "operation,strategy,P,m,s,k,predicted_s,simulated_s,abs_error,is_upper_bound";
  if (validation_columns) os << ",rel_error,bound_respected";
  os << '\n';
  for (const ReportRow& row : rows) {
    os << name_of(row.operation) << ',' << row.strategy << ',' << row.nprocs << ','
       << row.message_size << ',';
    if (row.segment_size) os << *row.segment_size;
    os << ',';
    if (row.segment_count) os << *row.segment_count;
    os << ',' << format_duration(row.predicted_s) << ',';
    if (row.simulated_s) os << format_duration(*row.simulated_s);
    os << ',';
    if (row.abs_error) os << format_duration(*row.abs_error);
    os << ',' << (row.is_upper_bound ? "true" : "false");
    if (validation_columns) {
      os << ',';
      if (row.rel_error) os << format_duration(*row.rel_error);
      os << ',';
      if (row.bound_respected) os << (*row.bound_respected ? "true" : "false");
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, std::span<const ReportRow> rows,
                bool validation_columns) {
  ordered_json doc = ordered_json::array();
  for (const ReportRow& row : rows) {
    ordered_json item;
    item["operation"] = name_of(row.operation);
    item["strategy"] = row.strategy;
    item["p"] = row.nprocs;
    item["m"] = row.message_size;
    item["s"] = row.segment_size ? ordered_json(*row.segment_size) : nullptr;
    item["k"] = row.segment_count ? ordered_json(*row.segment_count) : nullptr;
    item["predicted_s"] = row.predicted_s;
    item["simulated_s"] = row.simulated_s ? ordered_json(*row.simulated_s) : nullptr;
    item["abs_error"] = row.abs_error ? ordered_json(*row.abs_error) : nullptr;
    item["is_upper_bound"] = row.is_upper_bound;
    if (validation_columns) {
      item["rel_error"] = row.rel_error ? ordered_json(*row.rel_error) : nullptr;
      item["bound_respected"] =
          row.bound_respected ? ordered_json(*row.bound_respected) : nullptr;
    }
    doc.push_back(std::move(item));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace

void write_report(std::ostream& os, std::span<const ReportRow> rows,
                  ReportFormat format, bool validation_columns) {
  if (format == ReportFormat::Csv) {
    write_csv(os, rows, validation_columns);
  } else {
    write_json(os, rows, validation_columns);
  }
}

}  // namespace cctune

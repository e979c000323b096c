#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "cctune/simulator.hpp"

namespace cctune {

enum class ReportFormat { Csv, Json };

// One flat result record. Columns, in order:
//   operation,strategy,P,m,s,k,predicted_s,simulated_s,abs_error,is_upper_bound
// `validate` reports append rel_error and bound_respected. Absent values are
// empty CSV fields / JSON nulls.
struct ReportRow {
  Operation operation = Operation::Broadcast;
  std::string strategy;
  int nprocs = 0;
  Bytes message_size = 0;
  std::optional<Bytes> segment_size;
  std::optional<std::int64_t> segment_count;
  Seconds predicted_s = 0.0;
  std::optional<Seconds> simulated_s;
  std::optional<Seconds> abs_error;
  bool is_upper_bound = false;
  std::optional<double> rel_error;
  std::optional<bool> bound_respected;
};

ReportRow row_from(const Prediction& prediction);
ReportRow row_from(const ValidationRecord& record);

// Durations render as scientific notation with 6 significant digits.
std::string format_duration(Seconds seconds);

void write_report(std::ostream& os, std::span<const ReportRow> rows,
                  ReportFormat format, bool validation_columns = false);

}  // namespace cctune

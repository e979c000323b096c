#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cctune/report.hpp"
#include "cctune/tuner.hpp"

namespace {

using namespace cctune;

constexpr double kExactRelTolerance = 1e-9;

struct Opts {
  std::string op = "broadcast";
  std::string params_path;
  int nprocs = 0;
  std::optional<int> nprocs_opt;
  std::string nprocs_range;
  Bytes msg_size = 0;
  std::string msg_sizes;
  std::string msg_range;
  std::vector<std::string> strategies;
  std::optional<Bytes> segment_size;
  Bytes base_datatype = kDefaultBaseDatatype;
  std::string format = "csv";
  bool exclude_bounds = false;
  std::string event_log;
  // gen-params
  std::string preset;
  std::optional<double> overhead;
  std::optional<double> bandwidth;
  std::optional<double> latency;
  std::string label;
};

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  std::cerr << "run with --help for usage\n";
  return 2;
}

PLogPParams load_params_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("params: cannot open file \"" + path + "\"");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  PLogPParams params = load_params(buf.str());
  for (const std::string& warning : param_warnings(params)) {
    std::cerr << "warning: " << warning << '\n';
  }
  return params;
}

void emit(const Opts& o, const std::vector<ReportRow>& rows, bool validation_columns) {
  write_report(std::cout, rows,
               o.format == "json" ? ReportFormat::Json : ReportFormat::Csv,
               validation_columns);
}

bool parse_int(std::string_view text, std::int64_t& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

// MIN:MAX:FACTOR, geometric and inclusive of MAX when the grid lands on it.
std::optional<std::vector<Bytes>> parse_msg_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  double factor = 0.0;
  if (parts.size() != 3 || !parse_int(parts[0], lo) || !parse_int(parts[1], hi)) {
    return std::nullopt;
  }
  try {
    std::size_t used = 0;
    factor = std::stod(std::string(parts[2]), &used);
    if (used != parts[2].size()) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (lo < 1 || hi < lo || !(factor > 1.0) || !std::isfinite(factor)) {
    return std::nullopt;
  }
  std::vector<Bytes> sizes;
  for (double x = static_cast<double>(lo); std::llround(x) <= hi; x *= factor) {
    const Bytes s = std::llround(x);
    if (sizes.empty() || s > sizes.back()) sizes.push_back(s);
  }
  return sizes;
}

std::optional<std::vector<Bytes>> parse_msg_sizes(const std::string& csv) {
  std::vector<Bytes> sizes;
  for (std::string_view part : split(csv, ',')) {
    std::int64_t value = 0;
    if (!parse_int(part, value) || value < 1) return std::nullopt;
    sizes.push_back(value);
  }
  return sizes;
}

std::optional<std::vector<int>> parse_nprocs_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2 && parts.size() != 3) return std::nullopt;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t step = 1;
  if (!parse_int(parts[0], lo) || !parse_int(parts[1], hi)) return std::nullopt;
  if (parts.size() == 3 && !parse_int(parts[2], step)) return std::nullopt;
  if (lo < 2 || hi < lo || step < 1) return std::nullopt;
  std::vector<int> out;
  for (std::int64_t p = lo; p <= hi; p += step) out.push_back(static_cast<int>(p));
  return out;
}

// Resolves --strategy values (default: all strategies of the operation).
// Returns 0 on success and fills exactly one of the two lists.
int resolve_strategies(const Opts& o, std::vector<BroadcastStrategy>& broadcast,
                       std::vector<ScatterStrategy>& scatter) {
  const bool is_broadcast = o.op == "broadcast";
  if (o.strategies.empty()) {
    if (is_broadcast) {
      broadcast.assign(kAllBroadcastStrategies.begin(), kAllBroadcastStrategies.end());
    } else {
      scatter.assign(kAllScatterStrategies.begin(), kAllScatterStrategies.end());
    }
  } else {
    for (const std::string& name : o.strategies) {
      if (is_broadcast) {
        const auto s = parse_broadcast_strategy(name);
        if (!s) return usage_error("unknown broadcast strategy \"" + name + "\"");
        broadcast.push_back(*s);
      } else {
        const auto s = parse_scatter_strategy(name);
        if (!s) return usage_error("unknown scatter strategy \"" + name + "\"");
        scatter.push_back(*s);
      }
    }
  }
  if (o.exclude_bounds) {
    std::erase_if(broadcast,
                  [](BroadcastStrategy s) { return s == BroadcastStrategy::BinaryTree; });
  }
  if (o.segment_size) {
    if (!is_broadcast) {
      return usage_error("--segment-size applies only to broadcast strategies");
    }
    if (std::none_of(broadcast.begin(), broadcast.end(), is_segmented)) {
      return usage_error("--segment-size given but no segmented strategy selected");
    }
  }
  return 0;
}

// Segment size used for one segmented strategy: the pinned flag value, or the
// grid optimum for this (P, m).
Bytes segment_for(const Opts& o, BroadcastStrategy strategy, const PLogPParams& params,
                  int nprocs, Bytes m) {
  if (o.segment_size) return *o.segment_size;
  return optimize_segment(strategy, params, nprocs, m, o.base_datatype).segment_size;
}

Prediction predict_one(const Opts& o, BroadcastStrategy strategy,
                       const PLogPParams& params, int nprocs, Bytes m) {
  if (is_segmented(strategy)) {
    return predict_broadcast(strategy, params, nprocs, m,
                             segment_for(o, strategy, params, nprocs, m));
  }
  return predict_broadcast(strategy, params, nprocs, m);
}

int run_predict(const Opts& o) {
  std::vector<BroadcastStrategy> broadcast;
  std::vector<ScatterStrategy> scatter;
  if (int rc = resolve_strategies(o, broadcast, scatter); rc != 0) return rc;
  const PLogPParams params = load_params_file(o.params_path);

  std::vector<ReportRow> rows;
  for (BroadcastStrategy s : broadcast) {
    rows.push_back(row_from(predict_one(o, s, params, o.nprocs, o.msg_size)));
  }
  for (ScatterStrategy s : scatter) {
    rows.push_back(row_from(predict_scatter(s, params, o.nprocs, o.msg_size)));
  }
  emit(o, rows, false);
  return 0;
}

int run_tune(const Opts& o) {
  std::vector<BroadcastStrategy> broadcast;
  std::vector<ScatterStrategy> scatter;
  if (int rc = resolve_strategies(o, broadcast, scatter); rc != 0) return rc;
  const PLogPParams params = load_params_file(o.params_path);

  TuneResult result;
  if (o.op == "broadcast") {
    if (o.segment_size) {
      for (BroadcastStrategy s : broadcast) {
        result.ranked.push_back(predict_one(o, s, params, o.nprocs, o.msg_size));
        ++result.candidates_evaluated;
      }
      if (result.ranked.empty()) {
        throw std::invalid_argument("no strategies to rank");
      }
      std::stable_sort(result.ranked.begin(), result.ranked.end(), prediction_order);
    } else {
      result = select_best_broadcast(params, o.nprocs, o.msg_size, broadcast,
                                     o.base_datatype);
    }
  } else {
    result = select_best_scatter(params, o.nprocs, o.msg_size, scatter);
  }

  std::vector<ReportRow> rows;
  for (const Prediction& p : result.ranked) rows.push_back(row_from(p));
  emit(o, rows, false);

  const Prediction& best = result.best();
  std::cerr << "best: " << name_of(best.strategy);
  if (best.segment) {
    std::cerr << " s=" << best.segment->segment_size
              << " k=" << best.segment->segment_count;
  }
  std::cerr << " predicted_s=" << format_duration(best.time) << '\n';
  return 0;
}

int run_sweep(const Opts& o) {
  std::vector<BroadcastStrategy> broadcast;
  std::vector<ScatterStrategy> scatter;
  if (int rc = resolve_strategies(o, broadcast, scatter); rc != 0) return rc;

  std::vector<Bytes> sizes;
  if (!o.msg_sizes.empty()) {
    const auto listed = parse_msg_sizes(o.msg_sizes);
    if (!listed) return usage_error("--msg-sizes must be a comma list of sizes >= 1");
    sizes.insert(sizes.end(), listed->begin(), listed->end());
  }
  if (!o.msg_range.empty()) {
    const auto ranged = parse_msg_range(o.msg_range);
    if (!ranged) return usage_error("--msg-range must be MIN:MAX:FACTOR with FACTOR > 1");
    sizes.insert(sizes.end(), ranged->begin(), ranged->end());
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.empty()) {
    return usage_error("no message sizes given (use --msg-sizes and/or --msg-range)");
  }

  const PLogPParams params = load_params_file(o.params_path);
  std::vector<ReportRow> rows;
  if (o.op == "broadcast") {
    if (o.segment_size) {
      for (Bytes m : sizes) {
        for (BroadcastStrategy s : broadcast) {
          rows.push_back(row_from(predict_one(o, s, params, o.nprocs, m)));
        }
      }
    } else {
      for (const SweepPoint& point :
           sweep_broadcast(params, o.nprocs, sizes, broadcast, o.base_datatype)) {
        for (const Prediction& p : point.predictions) rows.push_back(row_from(p));
      }
    }
  } else {
    for (const SweepPoint& point : sweep_scatter(params, o.nprocs, sizes, scatter)) {
      for (const Prediction& p : point.predictions) rows.push_back(row_from(p));
    }
  }
  emit(o, rows, false);
  return 0;
}

int run_simulate(const Opts& o) {
  if (o.strategies.size() != 1) {
    return usage_error("simulate requires exactly one --strategy");
  }
  std::vector<BroadcastStrategy> broadcast;
  std::vector<ScatterStrategy> scatter;
  if (int rc = resolve_strategies(o, broadcast, scatter); rc != 0) return rc;
  const PLogPParams params = load_params_file(o.params_path);

  Prediction prediction;
  Schedule schedule;
  if (o.op == "broadcast") {
    const BroadcastStrategy s = broadcast.front();
    std::optional<Bytes> seg;
    if (is_segmented(s)) seg = segment_for(o, s, params, o.nprocs, o.msg_size);
    prediction = predict_broadcast(s, params, o.nprocs, o.msg_size, seg);
    schedule = build_broadcast_schedule(s, o.nprocs, o.msg_size, seg);
  } else {
    prediction = predict_scatter(scatter.front(), params, o.nprocs, o.msg_size);
    schedule = build_scatter_schedule(scatter.front(), o.nprocs, o.msg_size);
  }
  const SimResult sim = simulate(schedule, params);

  ReportRow row = row_from(prediction);
  row.simulated_s = sim.makespan;
  row.abs_error = std::abs(sim.makespan - prediction.time);
  emit(o, {row}, false);

  if (!o.event_log.empty()) {
    std::ofstream log(o.event_log, std::ios::binary);
    if (!log) {
      throw std::runtime_error("cannot open event log file \"" + o.event_log + "\"");
    }
    log << "event_id,sender,receiver,bytes,kind,send_start_s,receive_s\n";
    for (const EventTiming& t : sim.event_log) {
      const SendEvent& e = schedule.events[t.event_id];
      log << t.event_id << ',' << e.sender << ',' << e.receiver << ','
          << e.payload_size << ',' << name_of(e.kind) << ','
          << format_duration(t.send_start) << ',' << format_duration(t.receive_time)
          << '\n';
    }
  }
  return 0;
}

int run_validate(const Opts& o) {
  std::vector<BroadcastStrategy> broadcast;
  std::vector<ScatterStrategy> scatter;
  if (int rc = resolve_strategies(o, broadcast, scatter); rc != 0) return rc;

  std::vector<int> nprocs_list;
  if (!o.nprocs_range.empty()) {
    const auto range = parse_nprocs_range(o.nprocs_range);
    if (!range) {
      return usage_error("--nprocs-range must be MIN:MAX[:STEP] with MIN >= 2");
    }
    nprocs_list = *range;
  } else if (o.nprocs_opt) {
    nprocs_list.push_back(*o.nprocs_opt);
  } else {
    return usage_error("validate requires --nprocs or --nprocs-range");
  }

  const PLogPParams params = load_params_file(o.params_path);
  std::vector<ReportRow> rows;
  bool exact_violation = false;
  auto account = [&](const ValidationRecord& record, int nprocs,
                     std::optional<Bytes> seg) {
    rows.push_back(row_from(record));
    if (exact_equivalence_expected(record.prediction.strategy, nprocs, o.msg_size,
                                   seg) &&
        record.rel_error > kExactRelTolerance) {
      exact_violation = true;
    }
  };
  for (int nprocs : nprocs_list) {
    for (BroadcastStrategy s : broadcast) {
      std::optional<Bytes> seg;
      if (is_segmented(s)) seg = segment_for(o, s, params, nprocs, o.msg_size);
      account(validate_strategy(s, params, nprocs, o.msg_size, seg), nprocs, seg);
    }
    for (ScatterStrategy s : scatter) {
      account(validate_strategy(s, params, nprocs, o.msg_size), nprocs, {});
    }
  }
  emit(o, rows, true);
  if (exact_violation) {
    std::cerr << "error: an exact-equivalence case exceeded rel_error "
              << kExactRelTolerance << '\n';
    return 1;
  }
  return 0;
}

int run_gen_params(const Opts& o) {
  double overhead = 0.0;
  double bandwidth = 0.0;
  double latency = 0.0;
  std::string label = o.label;
  if (!o.preset.empty()) {
    overhead = 3.0e-5;
    bandwidth = 1.25e7;
    latency = 5.0e-5;
    if (label.empty()) label = o.preset;
  } else if (!o.overhead || !o.bandwidth || !o.latency) {
    return usage_error(
        "gen-params requires --preset or all of --overhead, --bandwidth, --latency");
  }
  if (o.overhead) overhead = *o.overhead;
  if (o.bandwidth) bandwidth = *o.bandwidth;
  if (o.latency) latency = *o.latency;
  if (label.empty()) label = "synthetic";

  std::vector<Bytes> samples;
  for (Bytes s = 1; s <= Bytes{4} * 1024 * 1024; s *= 2) samples.push_back(s);
  std::cout << save_params(synth_params(overhead, bandwidth, latency, samples, label));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pLogP completion-time models, tuner, and simulator for broadcast/scatter"};
  app.set_version_flag("--version", "cctune 1.0.0");
  app.require_subcommand(1);

  Opts o;
  const auto positive = CLI::PositiveNumber;

  auto add_common = [&](CLI::App* cmd, bool with_msg_size) {
    cmd->add_option("--op", o.op, "Collective operation")
        ->required()
        ->check(CLI::IsMember({"broadcast", "scatter"}));
    cmd->add_option("--params", o.params_path, "Parameter file (JSON)")->required();
    if (with_msg_size) {
      cmd->add_option("--msg-size", o.msg_size,
                      "Message size in bytes (scatter: per-process block)")
          ->required()
          ->check(positive);
    }
    cmd->add_option("--strategy", o.strategies,
                    "Strategy name (repeatable; default: all for the operation)");
    cmd->add_option("--segment-size", o.segment_size,
                    "Pin the segment size for segmented strategies")
        ->check(positive);
    cmd->add_option("--base-datatype", o.base_datatype,
                    "Smallest segment candidate in bytes")
        ->check(positive);
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_nprocs = [&](CLI::App* cmd) {
    cmd->add_option("--nprocs", o.nprocs, "Number of processes")
        ->required()
        ->check(positive);
  };

  CLI::App* predict = app.add_subcommand("predict", "Predict completion times");
  add_common(predict, true);
  add_nprocs(predict);

  CLI::App* tune = app.add_subcommand("tune", "Rank strategies, best first");
  add_common(tune, true);
  add_nprocs(tune);
  tune->add_flag("--exclude-bounds", o.exclude_bounds,
                 "Drop upper-bound-only strategies from the ranking");

  CLI::App* sweep = app.add_subcommand("sweep", "Predict across message sizes");
  add_common(sweep, false);
  add_nprocs(sweep);
  sweep->add_option("--msg-sizes", o.msg_sizes, "Comma-separated sizes in bytes");
  sweep->add_option("--msg-range", o.msg_range, "Geometric size grid MIN:MAX:FACTOR");

  CLI::App* simulate = app.add_subcommand("simulate", "Run the discrete-event simulator");
  add_common(simulate, true);
  add_nprocs(simulate);
  simulate->add_option("--event-log", o.event_log, "Write the event log CSV here");

  CLI::App* validate = app.add_subcommand("validate", "Compare models against simulation");
  add_common(validate, true);
  auto* np = validate->add_option("--nprocs", o.nprocs_opt, "Number of processes")
                 ->check(positive);
  validate->add_option("--nprocs-range", o.nprocs_range, "Process grid MIN:MAX[:STEP]")
      ->excludes(np);

  CLI::App* gen = app.add_subcommand("gen-params", "Write a synthetic parameter file");
  gen->add_option("--preset", o.preset, "Named parameter preset")
      ->check(CLI::IsMember({"fast-ethernet-100"}));
  gen->add_option("--overhead", o.overhead, "Per-message overhead in seconds")
      ->check(positive);
  gen->add_option("--bandwidth", o.bandwidth, "Bandwidth in bytes per second")
      ->check(positive);
  gen->add_option("--latency", o.latency, "Wire latency in seconds")->check(positive);
  gen->add_option("--label", o.label, "Label stored in the file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(predict)) return run_predict(o);
    if (app.got_subcommand(tune)) return run_tune(o);
    if (app.got_subcommand(sweep)) return run_sweep(o);
    if (app.got_subcommand(simulate)) return run_simulate(o);
    if (app.got_subcommand(validate)) return run_validate(o);
    if (app.got_subcommand(gen)) return run_gen_params(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

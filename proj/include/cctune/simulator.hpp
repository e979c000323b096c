#pragma once

#include "cctune/cost_model.hpp"
#include "cctune/schedule.hpp"

namespace cctune {

struct EventTiming {
  int event_id = 0;
  Seconds send_start = 0.0;
  Seconds receive_time = 0.0;
};

struct SimResult {
  Seconds makespan = 0.0;
  std::vector<Seconds> node_complete;  // per node; root completes at 0
  std::vector<EventTiming> event_log;  // ordered by event id
};

// Discrete-event execution of a schedule under the following rules:
//   (a) a send occupies its sender for gap(size) from the instant it starts,
//       and a sender issues its sends in sequence_rank order;
//   (b) a send with after_receive cannot start before that event has been
//       received by the sender;
//   (c) a message sent at t is fully received at t + gap(size) + latency.
// A node is complete once the payload bytes delivered to it reach its
// delivery goal; the makespan is the latest completion. Ready events are
// processed in (earliest feasible start, sequence_rank, event id) order, so
// equal inputs always produce identical event logs.
SimResult simulate(const Schedule& schedule, const PLogPParams& params);

struct ValidationRecord {
  Prediction prediction;
  Seconds simulated = 0.0;
  Seconds abs_error = 0.0;
  double rel_error = 0.0;     // abs_error / predicted
  bool bound_respected = true;  // simulated <= predicted when the model is a bound
};

// Runs the closed-form predictor and the simulator on identical inputs.
ValidationRecord validate_strategy(BroadcastStrategy strategy, const PLogPParams& params,
                                   int nprocs, Bytes message_size,
                                   std::optional<Bytes> segment_size = {});
ValidationRecord validate_strategy(ScatterStrategy strategy, const PLogPParams& params,
                                   int nprocs, Bytes block_size);

// True when the model and the simulated schedule agree to rounding error:
// flat and chain shapes everywhere, binomial shapes at power-of-two P, and
// segmented variants only when the segment size divides the message. The
// binary tree row is a bound, never an equality.
bool exact_equivalence_expected(const StrategyRef& strategy, int nprocs,
                                Bytes message_size,
                                std::optional<Bytes> segment_size = {});

}  // namespace cctune

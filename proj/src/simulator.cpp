#include "cctune/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace cctune {

namespace {

void check_schedule(const Schedule& schedule) {
  const int n = static_cast<int>(schedule.events.size());
  if (schedule.nprocs < 2) {
    throw std::invalid_argument("schedule: nprocs must be >= 2");
  }
  if (static_cast<int>(schedule.delivery_goal.size()) != schedule.nprocs) {
    throw std::invalid_argument("schedule: delivery_goal size != nprocs");
  }
  for (int i = 0; i < n; ++i) {
    const SendEvent& e = schedule.events[i];
    if (e.id != i) {
      throw std::invalid_argument("schedule: event ids must equal their index");
    }
    if (e.sender < 0 || e.sender >= schedule.nprocs || e.receiver < 0 ||
        e.receiver >= schedule.nprocs) {
      throw std::invalid_argument("schedule: event " + std::to_string(i) +
                                  " references a node out of range");
    }
    if (e.sender == e.receiver) {
      throw std::invalid_argument("schedule: event " + std::to_string(i) +
                                  " sends to its own sender");
    }
    if (e.payload_size < 1) {
      throw std::invalid_argument("schedule: event " + std::to_string(i) +
                                  " has a non-positive size");
    }
    if (e.after_receive) {
      const int dep = *e.after_receive;
      if (dep < 0 || dep >= n || dep == i) {
        throw std::invalid_argument("schedule: event " + std::to_string(i) +
                                    " depends on an invalid event");
      }
      if (schedule.events[dep].receiver != e.sender) {
        throw std::invalid_argument("schedule: event " + std::to_string(i) +
                                    " depends on an event its sender never receives");
      }
    }
  }
}

}  // namespace

SimResult simulate(const Schedule& schedule, const PLogPParams& params) {
  check_schedule(schedule);
  const int n = static_cast<int>(schedule.events.size());

  // Per sender, chain the sends in sequence_rank order.
  std::vector<std::vector<int>> by_sender(schedule.nprocs);
  for (const SendEvent& e : schedule.events) by_sender[e.sender].push_back(e.id);
  std::vector<int> prev_rank(n, -1), next_rank(n, -1);
  for (auto& ids : by_sender) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      return schedule.events[a].sequence_rank < schedule.events[b].sequence_rank;
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i + 1 < ids.size()) {
        if (schedule.events[ids[i]].sequence_rank ==
            schedule.events[ids[i + 1]].sequence_rank) {
          throw std::invalid_argument("schedule: duplicate sequence rank on sender " +
                                      std::to_string(schedule.events[ids[i]].sender));
        }
        next_rank[ids[i]] = ids[i + 1];
        prev_rank[ids[i + 1]] = ids[i];
      }
    }
  }

  std::vector<std::vector<int>> waiters(n);  // events gated on a receive
  std::vector<int> missing(n, 0);
  for (const SendEvent& e : schedule.events) {
    if (prev_rank[e.id] >= 0) ++missing[e.id];
    if (e.after_receive) {
      waiters[*e.after_receive].push_back(e.id);
      ++missing[e.id];
    }
  }

  std::vector<Seconds> sender_free(n, 0.0);  // per event: when its sender is free
  std::vector<Seconds> dep_ready(n, 0.0);    // per event: when its dependency landed
  std::vector<Seconds> start(n, 0.0), recv(n, 0.0);

  using Entry = std::tuple<Seconds, int, int>;  // (feasible start, rank, id)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> ready;
  for (const SendEvent& e : schedule.events) {
    if (missing[e.id] == 0) ready.emplace(0.0, e.sequence_rank, e.id);
  }

  int scheduled = 0;
  while (!ready.empty()) {
    const auto [feasible, rank, id] = ready.top();
    ready.pop();
    const SendEvent& e = schedule.events[id];
    const Seconds gap = params.gap(e.payload_size);
    start[id] = feasible;
    recv[id] = feasible + gap + params.latency;
    ++scheduled;

    auto release = [&](int next) {
      if (--missing[next] == 0) {
        const Seconds t = std::max(sender_free[next], dep_ready[next]);
        ready.emplace(t, schedule.events[next].sequence_rank, next);
      }
    };
    if (next_rank[id] >= 0) {
      sender_free[next_rank[id]] = feasible + gap;
      release(next_rank[id]);
    }
    for (int waiter : waiters[id]) {
      dep_ready[waiter] = recv[id];
      release(waiter);
    }
  }
  if (scheduled != n) {
    throw std::invalid_argument("schedule: dependency cycle");
  }

  SimResult result;
  result.event_log.reserve(n);
  for (int i = 0; i < n; ++i) {
    result.event_log.push_back(EventTiming{i, start[i], recv[i]});
  }

  // A node completes when the payload bytes it has received reach its goal.
  std::vector<std::vector<int>> inbound(schedule.nprocs);
  for (const SendEvent& e : schedule.events) {
    if (e.kind == EventKind::Payload) inbound[e.receiver].push_back(e.id);
  }
  result.node_complete.assign(schedule.nprocs, 0.0);
  for (int node = 0; node < schedule.nprocs; ++node) {
    if (schedule.delivery_goal[node] <= 0) continue;
    auto& ids = inbound[node];
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return std::tie(recv[a], a) < std::tie(recv[b], b); });
    Bytes received = 0;
    Seconds done = -1.0;
    for (int id : ids) {
      received += schedule.events[id].payload_size;
      if (received >= schedule.delivery_goal[node]) {
        done = recv[id];
        break;
      }
    }
    if (done < 0.0) {
      throw std::invalid_argument("schedule: node " + std::to_string(node) +
                                  " receives " + std::to_string(received) + " of " +
                                  std::to_string(schedule.delivery_goal[node]) +
                                  " bytes");
    }
    result.node_complete[node] = done;
  }
  result.makespan =
      *std::max_element(result.node_complete.begin(), result.node_complete.end());
  return result;
}

namespace {

ValidationRecord make_record(Prediction prediction, const Schedule& schedule,
                             const PLogPParams& params) {
  ValidationRecord record;
  record.prediction = std::move(prediction);
  record.simulated = simulate(schedule, params).makespan;
  record.abs_error = std::abs(record.simulated - record.prediction.time);
  record.rel_error = record.prediction.time != 0.0
                         ? record.abs_error / record.prediction.time
                         : (record.abs_error == 0.0 ? 0.0 : INFINITY);
  if (record.prediction.is_upper_bound) {
    record.bound_respected =
        record.simulated <= record.prediction.time * (1.0 + 1e-12);
  }
  return record;
}

}  // namespace

ValidationRecord validate_strategy(BroadcastStrategy strategy, const PLogPParams& params,
                                   int nprocs, Bytes message_size,
                                   std::optional<Bytes> segment_size) {
  return make_record(
      predict_broadcast(strategy, params, nprocs, message_size, segment_size),
      build_broadcast_schedule(strategy, nprocs, message_size, segment_size), params);
}

ValidationRecord validate_strategy(ScatterStrategy strategy, const PLogPParams& params,
                                   int nprocs, Bytes block_size) {
  return make_record(predict_scatter(strategy, params, nprocs, block_size),
                     build_scatter_schedule(strategy, nprocs, block_size), params);
}

bool exact_equivalence_expected(const StrategyRef& strategy, int nprocs,
                                Bytes message_size,
                                std::optional<Bytes> segment_size) {
  const bool pow2 = std::has_single_bit(static_cast<unsigned>(nprocs));
  const bool divides = [&] {
    if (!segment_size) return false;
    const Bytes s = std::min(*segment_size, message_size);
    return s >= 1 && message_size % s == 0;
  }();

  if (const auto* b = std::get_if<BroadcastStrategy>(&strategy)) {
    switch (*b) {
      case BroadcastStrategy::FlatTree:
      case BroadcastStrategy::FlatTreeRendezvous:
      case BroadcastStrategy::Chain:
      case BroadcastStrategy::ChainRendezvous:
        return true;
      case BroadcastStrategy::SegmentedFlatTree:
      case BroadcastStrategy::SegmentedChain:
        return divides;
      case BroadcastStrategy::BinomialTree:
      case BroadcastStrategy::BinomialTreeRendezvous:
        return pow2;
      case BroadcastStrategy::SegmentedBinomialTree:
        return pow2 && divides;
      case BroadcastStrategy::BinaryTree:
        return false;
    }
    return false;
  }
  switch (std::get<ScatterStrategy>(strategy)) {
    case ScatterStrategy::FlatTree:
    case ScatterStrategy::Chain:
      return true;
    case ScatterStrategy::BinomialTree:
      return pow2;
  }
  return false;
}

}  // namespace cctune

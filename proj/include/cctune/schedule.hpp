#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cctune/params.hpp"
#include "cctune/strategy.hpp"

namespace cctune {

using NodeId = int;  // 0 is the root

enum class EventKind { Payload, RendezvousRequest, RendezvousAck };
std::string_view name_of(EventKind kind);

struct SendEvent {
  int id = 0;  // equals its index in Schedule::events
  NodeId sender = 0;
  NodeId receiver = 0;
  Bytes payload_size = 0;
  EventKind kind = EventKind::Payload;
  // The sender may not issue this send before the named event has been
  // received by the sender.
  std::optional<int> after_receive;
  // Orders the sends sharing a sender.
  int sequence_rank = 0;
};

// Explicit send-event DAG realizing one strategy, executable by the simulator.
struct Schedule {
  Operation operation = Operation::Broadcast;
  StrategyRef strategy = BroadcastStrategy::FlatTree;
  int nprocs = 0;
  Bytes message_size = 0;
  std::optional<SegmentSpec> segment;
  std::vector<SendEvent> events;
  // Bytes of useful data each node must receive to be complete. Broadcast:
  // the full message. Scatter: the node's own block; bytes forwarded through
  // a node on behalf of others do not raise its goal.
  std::vector<Bytes> delivery_goal;
};

Schedule build_broadcast_schedule(BroadcastStrategy strategy, int nprocs,
                                  Bytes message_size,
                                  std::optional<Bytes> segment_size = {});

Schedule build_scatter_schedule(ScatterStrategy strategy, int nprocs, Bytes block_size);

// Diagnostic listing, one event per line: id sender receiver size kind dep.
// Intended for golden tests and debugging; not a stable interchange format.
std::string format_schedule(const Schedule& schedule);

}  // namespace cctune

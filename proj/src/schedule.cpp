#include "cctune/schedule.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "cctune/cost_model.hpp"

namespace cctune {

namespace {

// Appends events, assigning ids by arrival order and sequence ranks per sender.
class Builder {
 public:
  Builder(int nprocs, Bytes goal) : next_rank_(nprocs, 0), goals_(nprocs, goal) {
    goals_[0] = 0;
  }

  int add(NodeId sender, NodeId receiver, Bytes size, EventKind kind,
          std::optional<int> after_receive = {}) {
    SendEvent e;
    e.id = static_cast<int>(events_.size());
    e.sender = sender;
    e.receiver = receiver;
    e.payload_size = size;
    e.kind = kind;
    e.after_receive = after_receive;
    e.sequence_rank = next_rank_[sender]++;
    events_.push_back(e);
    return e.id;
  }

  std::vector<SendEvent> take_events() { return std::move(events_); }
  std::vector<Bytes> take_goals() { return std::move(goals_); }

 private:
  std::vector<SendEvent> events_;
  std::vector<int> next_rank_;
  std::vector<Bytes> goals_;
};

Bytes segment_bytes(const SegmentSpec& spec, Bytes message_size, std::int64_t index) {
  if (index < spec.segment_count - 1) return spec.segment_size;
  return message_size - spec.segment_size * (spec.segment_count - 1);
}

void check_domain(int nprocs, Bytes message_size) {
  if (nprocs < 2) {
    throw std::invalid_argument("nprocs must be >= 2, got " + std::to_string(nprocs));
  }
  if (message_size < 1) {
    throw std::invalid_argument("message size must be >= 1, got " +
                                std::to_string(message_size));
  }
}

void build_flat(Builder& b, int nprocs, Bytes m) {
  for (NodeId i = 1; i < nprocs; ++i) {
    b.add(0, i, m, EventKind::Payload);
  }
}

// One collective handshake clears the root to stream: request the first
// receiver, await its ack, then send every payload back to back.
void build_flat_rendezvous(Builder& b, int nprocs, Bytes m) {
  const int req = b.add(0, 1, 1, EventKind::RendezvousRequest);
  const int ack = b.add(1, 0, 1, EventKind::RendezvousAck, req);
  b.add(0, 1, m, EventKind::Payload, ack);
  for (NodeId i = 2; i < nprocs; ++i) {
    b.add(0, i, m, EventKind::Payload);
  }
}

void build_segmented_flat(Builder& b, int nprocs, Bytes m, const SegmentSpec& spec) {
  for (NodeId i = 1; i < nprocs; ++i) {
    for (std::int64_t j = 0; j < spec.segment_count; ++j) {
      b.add(0, i, segment_bytes(spec, m, j), EventKind::Payload);
    }
  }
}

void build_chain(Builder& b, int nprocs, Bytes m) {
  std::optional<int> prev;
  for (NodeId i = 0; i + 1 < nprocs; ++i) {
    prev = b.add(i, i + 1, m, EventKind::Payload, prev);
  }
}

void build_chain_rendezvous(Builder& b, int nprocs, Bytes m) {
  std::optional<int> prev_payload;
  for (NodeId i = 0; i + 1 < nprocs; ++i) {
    const int req = b.add(i, i + 1, 1, EventKind::RendezvousRequest, prev_payload);
    const int ack = b.add(i + 1, i, 1, EventKind::RendezvousAck, req);
    prev_payload = b.add(i, i + 1, m, EventKind::Payload, ack);
  }
}

// Cut-through pipeline: each relay forwards a segment as soon as it lands.
void build_segmented_chain(Builder& b, int nprocs, Bytes m, const SegmentSpec& spec) {
  for (NodeId i = 0; i + 1 < nprocs; ++i) {
    for (std::int64_t j = 0; j < spec.segment_count; ++j) {
      std::optional<int> dep;
      if (i > 0) dep = static_cast<int>((i - 1) * spec.segment_count + j);
      b.add(i, i + 1, segment_bytes(spec, m, j), EventKind::Payload, dep);
    }
  }
}

// Complete binary tree on node indices; children of i are 2i+1 and 2i+2,
// served left to right.
void build_binary_tree(Builder& b, int nprocs, Bytes m) {
  std::vector<std::optional<int>> incoming(nprocs);
  for (NodeId i = 0; i < nprocs; ++i) {
    for (NodeId c = 2 * i + 1; c <= 2 * i + 2 && c < nprocs; ++c) {
      incoming[c] = b.add(i, c, m, EventKind::Payload, incoming[i]);
    }
  }
}

// Recursive doubling: in round r every holder i < 2^r covers i + 2^r.
void build_binomial(Builder& b, int nprocs, Bytes m, bool rendezvous) {
  std::vector<std::optional<int>> incoming(nprocs);
  const int rounds = ceil_log2(nprocs);
  for (int r = 0; r < rounds; ++r) {
    for (NodeId i = 0; i < (NodeId{1} << r) && i + (NodeId{1} << r) < nprocs; ++i) {
      const NodeId c = i + (NodeId{1} << r);
      if (rendezvous) {
        const int req = b.add(i, c, 1, EventKind::RendezvousRequest, incoming[i]);
        const int ack = b.add(c, i, 1, EventKind::RendezvousAck, req);
        incoming[c] = b.add(i, c, m, EventKind::Payload, ack);
      } else {
        incoming[c] = b.add(i, c, m, EventKind::Payload, incoming[i]);
      }
    }
  }
}

// Store-and-forward pipeline on the binomial tree: a node relays only after
// the whole message has landed, then streams all segments per child.
void build_segmented_binomial(Builder& b, int nprocs, Bytes m, const SegmentSpec& spec) {
  std::vector<std::optional<int>> incoming(nprocs);
  const int rounds = ceil_log2(nprocs);
  for (int r = 0; r < rounds; ++r) {
    for (NodeId i = 0; i < (NodeId{1} << r) && i + (NodeId{1} << r) < nprocs; ++i) {
      const NodeId c = i + (NodeId{1} << r);
      int last = 0;
      for (std::int64_t j = 0; j < spec.segment_count; ++j) {
        last = b.add(i, c, segment_bytes(spec, m, j), EventKind::Payload, incoming[i]);
      }
      incoming[c] = last;
    }
  }
}

void build_scatter_flat(Builder& b, int nprocs, Bytes block) {
  for (NodeId i = 1; i < nprocs; ++i) {
    b.add(0, i, block, EventKind::Payload);
  }
}

// Each hop forwards one combined block holding everything still owed
// downstream, so hop i -> i+1 carries (P-1-i) blocks.
void build_scatter_chain(Builder& b, int nprocs, Bytes block) {
  std::optional<int> prev;
  for (NodeId i = 0; i + 1 < nprocs; ++i) {
    const Bytes size = static_cast<Bytes>(nprocs - 1 - i) * block;
    prev = b.add(i, i + 1, size, EventKind::Payload, prev);
  }
}

// Binomial scatter: a holder owns the contiguous index range [head, head+span)
// and hands each child its whole subtree in one send, largest subtree first.
void build_scatter_binomial(Builder& b, int nprocs, Bytes block) {
  struct Holder {
    NodeId head;
    NodeId span;
    std::optional<int> incoming;
  };
  std::queue<Holder> pending;
  pending.push(Holder{0, nprocs, {}});
  while (!pending.empty()) {
    const Holder h = pending.front();
    pending.pop();
    struct Child {
      NodeId head;
      NodeId span;
    };
    std::vector<Child> children;
    for (int j = 0; (NodeId{1} << j) < h.span; ++j) {
      const NodeId head = h.head + (NodeId{1} << j);
      const NodeId span = std::min<NodeId>(NodeId{1} << j, h.head + h.span - head);
      children.push_back(Child{head, span});
    }
    std::reverse(children.begin(), children.end());  // descending 2^j
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& c) { return a.span > c.span; });
    for (const Child& child : children) {
      const int id = b.add(h.head, child.head,
                           static_cast<Bytes>(child.span) * block,
                           EventKind::Payload, h.incoming);
      pending.push(Holder{child.head, child.span, id});
    }
  }
}

}  // namespace

std::string_view name_of(EventKind kind) {
  switch (kind) {
    case EventKind::Payload:
      return "payload";
    case EventKind::RendezvousRequest:
      return "rendezvous_request";
    case EventKind::RendezvousAck:
      return "rendezvous_ack";
  }
  return "unknown";
}

Schedule build_broadcast_schedule(BroadcastStrategy strategy, int nprocs,
                                  Bytes message_size,
                                  std::optional<Bytes> segment_size) {
  check_domain(nprocs, message_size);
  if (is_segmented(strategy) && !segment_size) {
    throw std::invalid_argument(std::string(name_of(strategy)) +
                                " requires a segment size");
  }
  if (!is_segmented(strategy) && segment_size) {
    throw std::invalid_argument(std::string(name_of(strategy)) +
                                " does not take a segment size");
  }

  Schedule out;
  out.operation = Operation::Broadcast;
  out.strategy = strategy;
  out.nprocs = nprocs;
  out.message_size = message_size;

  Builder b(nprocs, message_size);
  SegmentSpec spec;
  if (is_segmented(strategy)) {
    spec = segments_for(message_size, *segment_size);
    out.segment = spec;
  }

  switch (strategy) {
    case BroadcastStrategy::FlatTree:
      build_flat(b, nprocs, message_size);
      break;
    case BroadcastStrategy::FlatTreeRendezvous:
      build_flat_rendezvous(b, nprocs, message_size);
      break;
    case BroadcastStrategy::SegmentedFlatTree:
      build_segmented_flat(b, nprocs, message_size, spec);
      break;
    case BroadcastStrategy::Chain:
      build_chain(b, nprocs, message_size);
      break;
    case BroadcastStrategy::ChainRendezvous:
      build_chain_rendezvous(b, nprocs, message_size);
      break;
    case BroadcastStrategy::SegmentedChain:
      build_segmented_chain(b, nprocs, message_size, spec);
      break;
    case BroadcastStrategy::BinaryTree:
      build_binary_tree(b, nprocs, message_size);
      break;
    case BroadcastStrategy::BinomialTree:
      build_binomial(b, nprocs, message_size, /*rendezvous=*/false);
      break;
    case BroadcastStrategy::BinomialTreeRendezvous:
      build_binomial(b, nprocs, message_size, /*rendezvous=*/true);
      break;
    case BroadcastStrategy::SegmentedBinomialTree:
      build_segmented_binomial(b, nprocs, message_size, spec);
      break;
  }

  out.events = b.take_events();
  out.delivery_goal = b.take_goals();
  return out;
}

Schedule build_scatter_schedule(ScatterStrategy strategy, int nprocs, Bytes block_size) {
  check_domain(nprocs, block_size);

  Schedule out;
  out.operation = Operation::Scatter;
  out.strategy = strategy;
  out.nprocs = nprocs;
  out.message_size = block_size;

  Builder b(nprocs, block_size);
  switch (strategy) {
    case ScatterStrategy::FlatTree:
      build_scatter_flat(b, nprocs, block_size);
      break;
    case ScatterStrategy::Chain:
      build_scatter_chain(b, nprocs, block_size);
      break;
    case ScatterStrategy::BinomialTree:
      build_scatter_binomial(b, nprocs, block_size);
      break;
  }

  out.events = b.take_events();
  out.delivery_goal = b.take_goals();
  return out;
}

std::string format_schedule(const Schedule& schedule) {
  std::ostringstream os;
  os << name_of(schedule.operation) << ' ' << name_of(schedule.strategy)
     << " P=" << schedule.nprocs << " m=" << schedule.message_size;
  if (schedule.segment) {
    os << " s=" << schedule.segment->segment_size
       << " k=" << schedule.segment->segment_count;
  }
  os << '\n';
  for (const SendEvent& e : schedule.events) {
    os << e.id << ' ' << e.sender << ' ' << e.receiver << ' ' << e.payload_size
       << ' ' << name_of(e.kind) << ' ';
    if (e.after_receive) {
      os << *e.after_receive;
    } else {
      os << '-';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cctune

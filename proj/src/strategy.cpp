#include "cctune/strategy.hpp"

namespace cctune {

namespace {

constexpr std::string_view kBroadcastNames[] = {
    "flat_tree",
    "flat_tree_rendezvous",
    "segmented_flat_tree",
    "chain",
    "chain_rendezvous",
    "segmented_chain",
    "binary_tree",
    "binomial_tree",
    "binomial_tree_rendezvous",
    "segmented_binomial_tree",
};

constexpr std::string_view kScatterNames[] = {
    "flat_tree",
    "chain",
    "binomial_tree",
};

}  // namespace

bool is_segmented(BroadcastStrategy strategy) {
  switch (strategy) {
    case BroadcastStrategy::SegmentedFlatTree:
    case BroadcastStrategy::SegmentedChain:
    case BroadcastStrategy::SegmentedBinomialTree:
      return true;
    default:
      return false;
  }
}

std::string_view name_of(Operation op) {
  return op == Operation::Broadcast ? "broadcast" : "scatter";
}

std::string_view name_of(BroadcastStrategy strategy) {
  return kBroadcastNames[static_cast<int>(strategy)];
}

std::string_view name_of(ScatterStrategy strategy) {
  return kScatterNames[static_cast<int>(strategy)];
}

std::string_view name_of(const StrategyRef& strategy) {
  if (const auto* b = std::get_if<BroadcastStrategy>(&strategy)) return name_of(*b);
  return name_of(std::get<ScatterStrategy>(strategy));
}

Operation operation_of(const StrategyRef& strategy) {
  return std::holds_alternative<BroadcastStrategy>(strategy) ? Operation::Broadcast
                                                             : Operation::Scatter;
}

int enum_index(const StrategyRef& strategy) {
  if (const auto* b = std::get_if<BroadcastStrategy>(&strategy)) {
    return static_cast<int>(*b);
  }
  return static_cast<int>(std::get<ScatterStrategy>(strategy));
}

std::optional<Operation> parse_operation(std::string_view name) {
  if (name == "broadcast") return Operation::Broadcast;
  if (name == "scatter") return Operation::Scatter;
  return std::nullopt;
}

std::optional<BroadcastStrategy> parse_broadcast_strategy(std::string_view name) {
  for (BroadcastStrategy s : kAllBroadcastStrategies) {
    if (name == name_of(s)) return s;
  }
  return std::nullopt;
}

std::optional<ScatterStrategy> parse_scatter_strategy(std::string_view name) {
  for (ScatterStrategy s : kAllScatterStrategies) {
    if (name == name_of(s)) return s;
  }
  return std::nullopt;
}

}  // namespace cctune

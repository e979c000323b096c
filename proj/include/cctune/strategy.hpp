#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <variant>

namespace cctune {

enum class Operation { Broadcast, Scatter };

// Broadcast implementation techniques. The enumeration order is the
// tie-breaking order used when ranking strategies with equal predicted times.
enum class BroadcastStrategy {
  FlatTree,
  FlatTreeRendezvous,
  SegmentedFlatTree,
  Chain,
  ChainRendezvous,
  SegmentedChain,
  BinaryTree,
  BinomialTree,
  BinomialTreeRendezvous,
  SegmentedBinomialTree,
};

enum class ScatterStrategy {
  FlatTree,
  Chain,
  BinomialTree,
};

inline constexpr std::array<BroadcastStrategy, 10> kAllBroadcastStrategies = {
    BroadcastStrategy::FlatTree,
    BroadcastStrategy::FlatTreeRendezvous,
    BroadcastStrategy::SegmentedFlatTree,
    BroadcastStrategy::Chain,
    BroadcastStrategy::ChainRendezvous,
    BroadcastStrategy::SegmentedChain,
    BroadcastStrategy::BinaryTree,
    BroadcastStrategy::BinomialTree,
    BroadcastStrategy::BinomialTreeRendezvous,
    BroadcastStrategy::SegmentedBinomialTree,
};

inline constexpr std::array<ScatterStrategy, 3> kAllScatterStrategies = {
    ScatterStrategy::FlatTree,
    ScatterStrategy::Chain,
    ScatterStrategy::BinomialTree,
};

using StrategyRef = std::variant<BroadcastStrategy, ScatterStrategy>;

bool is_segmented(BroadcastStrategy strategy);

std::string_view name_of(Operation op);
std::string_view name_of(BroadcastStrategy strategy);
std::string_view name_of(ScatterStrategy strategy);
std::string_view name_of(const StrategyRef& strategy);

Operation operation_of(const StrategyRef& strategy);
int enum_index(const StrategyRef& strategy);

std::optional<Operation> parse_operation(std::string_view name);
std::optional<BroadcastStrategy> parse_broadcast_strategy(std::string_view name);
std::optional<ScatterStrategy> parse_scatter_strategy(std::string_view name);

}  // namespace cctune

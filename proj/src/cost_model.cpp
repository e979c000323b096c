#include "cctune/cost_model.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace cctune {

namespace {

void check_domain(int nprocs, Bytes message_size) {
  if (nprocs < 2) {
    throw std::invalid_argument("nprocs must be >= 2, got " + std::to_string(nprocs));
  }
  if (message_size < 1) {
    throw std::invalid_argument("message size must be >= 1, got " +
                                std::to_string(message_size));
  }
}

}  // namespace

int floor_log2(std::int64_t v) {
  if (v < 1) {
    throw std::invalid_argument("log2 domain: value must be >= 1, got " +
                                std::to_string(v));
  }
  return std::bit_width(static_cast<std::uint64_t>(v)) - 1;
}

int ceil_log2(std::int64_t v) {
  if (v < 1) {
    throw std::invalid_argument("log2 domain: value must be >= 1, got " +
                                std::to_string(v));
  }
  if (v == 1) return 0;
  return std::bit_width(static_cast<std::uint64_t>(v - 1));
}

Prediction predict_broadcast(BroadcastStrategy strategy, const PLogPParams& params,
                             int nprocs, Bytes message_size,
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

  Prediction out;
  out.strategy = strategy;
  out.nprocs = nprocs;
  out.message_size = message_size;

  const double P1 = nprocs - 1;
  const double L = params.latency;
  const double flo = floor_log2(nprocs);
  const double clo = ceil_log2(nprocs);

  double gs = 0.0;
  double k = 0.0;
  if (is_segmented(strategy)) {
    const SegmentSpec spec = segments_for(message_size, *segment_size);
    out.segment = spec;
    gs = params.gap(spec.segment_size);
    k = static_cast<double>(spec.segment_count);
  }

  switch (strategy) {
    case BroadcastStrategy::FlatTree:
      out.time = P1 * params.gap(message_size) + L;
      break;
    case BroadcastStrategy::FlatTreeRendezvous:
      out.time = P1 * params.gap(message_size) + 2.0 * params.gap(1) + 3.0 * L;
      break;
    case BroadcastStrategy::SegmentedFlatTree:
      out.time = P1 * (gs * k) + L;
      break;
    case BroadcastStrategy::Chain:
      out.time = P1 * (params.gap(message_size) + L);
      break;
    case BroadcastStrategy::ChainRendezvous:
      out.time = P1 * (params.gap(message_size) + 2.0 * params.gap(1) + 3.0 * L);
      break;
    case BroadcastStrategy::SegmentedChain:
      out.time = P1 * (gs + L) + gs * (k - 1.0);
      break;
    case BroadcastStrategy::BinaryTree:
      out.time = clo * (2.0 * params.gap(message_size) + L);
      out.is_upper_bound = true;
      break;
    case BroadcastStrategy::BinomialTree:
      out.time = flo * params.gap(message_size) + clo * L;
      break;
    case BroadcastStrategy::BinomialTreeRendezvous:
      out.time = flo * params.gap(message_size) + clo * (2.0 * params.gap(1) + 3.0 * L);
      break;
    case BroadcastStrategy::SegmentedBinomialTree:
      out.time = flo * gs * k + clo * L;
      break;
  }
  return out;
}

Prediction predict_scatter(ScatterStrategy strategy, const PLogPParams& params,
                           int nprocs, Bytes block_size) {
  check_domain(nprocs, block_size);

  Prediction out;
  out.strategy = strategy;
  out.nprocs = nprocs;
  out.message_size = block_size;

  const double L = params.latency;

  switch (strategy) {
    case ScatterStrategy::FlatTree:
      out.time = (nprocs - 1) * params.gap(block_size) + L;
      break;
    case ScatterStrategy::Chain: {
      double sum = 0.0;
      for (int j = 1; j <= nprocs - 1; ++j) {
        sum += params.gap(static_cast<Bytes>(j) * block_size);
      }
      out.time = sum + (nprocs - 1) * L;
      break;
    }
    case ScatterStrategy::BinomialTree: {
      const int rounds = ceil_log2(nprocs);
      double sum = 0.0;
      for (int j = 0; j < rounds; ++j) {
        sum += params.gap((Bytes{1} << j) * block_size);
      }
      out.time = sum + rounds * L;
      break;
    }
  }
  return out;
}

}  // namespace cctune

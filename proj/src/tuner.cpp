#include "cctune/tuner.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cctune {

std::vector<Bytes> segment_candidates(const PLogPParams& params, Bytes message_size,
                                      Bytes base_datatype) {
  if (message_size < 1) {
    throw std::invalid_argument("message size must be >= 1, got " +
                                std::to_string(message_size));
  }
  if (base_datatype < 1) {
    throw std::invalid_argument("base datatype size must be >= 1, got " +
                                std::to_string(base_datatype));
  }
  std::vector<Bytes> out;
  for (Bytes p = std::bit_ceil(static_cast<std::uint64_t>(base_datatype));
       p <= message_size; p *= 2) {
    out.push_back(p);
  }
  for (const GapEntry& e : params.gaps.entries()) {
    if (e.size <= message_size) out.push_back(e.size);
  }
  out.push_back(message_size);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SegmentChoice optimize_segment(BroadcastStrategy strategy, const PLogPParams& params,
                               int nprocs, Bytes message_size, Bytes base_datatype) {
  if (!is_segmented(strategy)) {
    throw std::invalid_argument(std::string(name_of(strategy)) +
                                " has no segment size to optimize");
  }
  SegmentChoice best{0, 0.0};
  for (Bytes s : segment_candidates(params, message_size, base_datatype)) {
    const Seconds t = predict_broadcast(strategy, params, nprocs, message_size, s).time;
    if (best.segment_size == 0 || t <= best.time) {  // ties favor the larger segment
      best = SegmentChoice{s, t};
    }
  }
  return best;
}

bool prediction_order(const Prediction& a, const Prediction& b) {
  if (a.time != b.time) return a.time < b.time;
  const int ia = enum_index(a.strategy);
  const int ib = enum_index(b.strategy);
  if (ia != ib) return ia < ib;
  const Bytes sa = a.segment ? a.segment->segment_size : 0;
  const Bytes sb = b.segment ? b.segment->segment_size : 0;
  return sa > sb;
}

TuneResult select_best_broadcast(const PLogPParams& params, int nprocs,
                                 Bytes message_size,
                                 std::span<const BroadcastStrategy> strategies,
                                 Bytes base_datatype) {
  if (strategies.empty()) {
    throw std::invalid_argument("no strategies to rank");
  }
  TuneResult result;
  result.ranked.reserve(strategies.size());
  for (BroadcastStrategy strategy : strategies) {
    if (is_segmented(strategy)) {
      const SegmentChoice choice =
          optimize_segment(strategy, params, nprocs, message_size, base_datatype);
      result.candidates_evaluated +=
          segment_candidates(params, message_size, base_datatype).size();
      result.ranked.push_back(predict_broadcast(strategy, params, nprocs, message_size,
                                                choice.segment_size));
    } else {
      ++result.candidates_evaluated;
      result.ranked.push_back(predict_broadcast(strategy, params, nprocs, message_size));
    }
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(), prediction_order);
  return result;
}

TuneResult select_best_scatter(const PLogPParams& params, int nprocs, Bytes block_size,
                               std::span<const ScatterStrategy> strategies) {
  if (strategies.empty()) {
    throw std::invalid_argument("no strategies to rank");
  }
  TuneResult result;
  result.ranked.reserve(strategies.size());
  for (ScatterStrategy strategy : strategies) {
    ++result.candidates_evaluated;
    result.ranked.push_back(predict_scatter(strategy, params, nprocs, block_size));
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(), prediction_order);
  return result;
}

std::vector<SweepPoint> sweep_broadcast(const PLogPParams& params, int nprocs,
                                        std::span<const Bytes> message_sizes,
                                        std::span<const BroadcastStrategy> strategies,
                                        Bytes base_datatype) {
  if (strategies.empty()) {
    throw std::invalid_argument("no strategies to rank");
  }
  if (message_sizes.empty()) {
    throw std::invalid_argument("no message sizes to sweep");
  }
  std::vector<SweepPoint> points;
  points.reserve(message_sizes.size());
  for (Bytes m : message_sizes) {
    SweepPoint point;
    point.message_size = m;
    for (BroadcastStrategy strategy : strategies) {
      if (is_segmented(strategy)) {
        const SegmentChoice choice =
            optimize_segment(strategy, params, nprocs, m, base_datatype);
        point.predictions.push_back(
            predict_broadcast(strategy, params, nprocs, m, choice.segment_size));
      } else {
        point.predictions.push_back(predict_broadcast(strategy, params, nprocs, m));
      }
    }
    for (std::size_t i = 1; i < point.predictions.size(); ++i) {
      if (prediction_order(point.predictions[i],
                           point.predictions[point.best_index])) {
        point.best_index = i;
      }
    }
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<SweepPoint> sweep_scatter(const PLogPParams& params, int nprocs,
                                      std::span<const Bytes> message_sizes,
                                      std::span<const ScatterStrategy> strategies) {
  if (strategies.empty()) {
    throw std::invalid_argument("no strategies to rank");
  }
  if (message_sizes.empty()) {
    throw std::invalid_argument("no message sizes to sweep");
  }
  std::vector<SweepPoint> points;
  points.reserve(message_sizes.size());
  for (Bytes m : message_sizes) {
    SweepPoint point;
    point.message_size = m;
    for (ScatterStrategy strategy : strategies) {
      point.predictions.push_back(predict_scatter(strategy, params, nprocs, m));
    }
    for (std::size_t i = 1; i < point.predictions.size(); ++i) {
      if (prediction_order(point.predictions[i],
                           point.predictions[point.best_index])) {
        point.best_index = i;
      }
    }
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace cctune

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cctune/cost_model.hpp"

namespace cctune {

inline constexpr Bytes kDefaultBaseDatatype = 4;

// Candidate segment sizes searched by optimize_segment: every power of two in
// [base_datatype, m], every gap-table sample size <= m, and m itself.
// Returned ascending, deduplicated.
std::vector<Bytes> segment_candidates(const PLogPParams& params, Bytes message_size,
                                      Bytes base_datatype = kDefaultBaseDatatype);

struct SegmentChoice {
  Bytes segment_size = 0;
  Seconds time = 0.0;
};

// Picks the candidate segment size minimizing the predicted time, breaking
// ties toward the larger segment. A segment of m (one segment) equals the
// unsegmented counterpart, so segmentation is only chosen when it strictly
// helps.
SegmentChoice optimize_segment(BroadcastStrategy strategy, const PLogPParams& params,
                               int nprocs, Bytes message_size,
                               Bytes base_datatype = kDefaultBaseDatatype);

struct TuneResult {
  std::vector<Prediction> ranked;  // ascending time
  std::size_t candidates_evaluated = 0;
  const Prediction& best() const { return ranked.front(); }
};

// Ranking order: ascending time, ties broken by strategy enumeration order,
// then by larger segment size.
bool prediction_order(const Prediction& a, const Prediction& b);

// Evaluates every listed strategy (optimizing the segment size for segmented
// ones) and ranks the results. Throws std::invalid_argument on an empty
// strategy set.
TuneResult select_best_broadcast(const PLogPParams& params, int nprocs, Bytes message_size,
                                 std::span<const BroadcastStrategy> strategies,
                                 Bytes base_datatype = kDefaultBaseDatatype);
TuneResult select_best_scatter(const PLogPParams& params, int nprocs, Bytes block_size,
                               std::span<const ScatterStrategy> strategies);

struct SweepPoint {
  Bytes message_size = 0;
  std::vector<Prediction> predictions;  // one per requested strategy, in input order
  std::size_t best_index = 0;
};

std::vector<SweepPoint> sweep_broadcast(const PLogPParams& params, int nprocs,
                                        std::span<const Bytes> message_sizes,
                                        std::span<const BroadcastStrategy> strategies,
                                        Bytes base_datatype = kDefaultBaseDatatype);
std::vector<SweepPoint> sweep_scatter(const PLogPParams& params, int nprocs,
                                      std::span<const Bytes> message_sizes,
                                      std::span<const ScatterStrategy> strategies);

}  // namespace cctune

#pragma once

#include <optional>

#include "cctune/params.hpp"
#include "cctune/strategy.hpp"

namespace cctune {

// Exact integer base-2 logarithms (bit arithmetic, no floating point).
// Valid for v >= 1.
int floor_log2(std::int64_t v);
int ceil_log2(std::int64_t v);

struct Prediction {
  StrategyRef strategy;
  int nprocs = 0;          // P
  Bytes message_size = 0;  // m; for scatter, the per-process block size
  std::optional<SegmentSpec> segment;
  Seconds time = 0.0;
  bool is_upper_bound = false;  // true only for the binary tree estimate
};

// Closed-form completion-time models, evaluated with gap_of:
//
//   flat tree                  (P-1)*g(m) + L
//   flat tree rendezvous       (P-1)*g(m) + 2*g(1) + 3*L
//   segmented flat tree        (P-1)*(g(s)*k) + L
//   chain                      (P-1)*(g(m) + L)
//   chain rendezvous           (P-1)*(g(m) + 2*g(1) + 3*L)
//   segmented chain            (P-1)*(g(s) + L) + g(s)*(k-1)
//   binary tree                <= ceil(log2 P)*(2*g(m) + L)
//   binomial tree              floor(log2 P)*g(m) + ceil(log2 P)*L
//   binomial tree rendezvous   floor(log2 P)*g(m) + ceil(log2 P)*(2*g(1) + 3*L)
//   segmented binomial tree    floor(log2 P)*g(s)*k + ceil(log2 P)*L
//
// Segmented strategies require a segment size; the others forbid one.
Prediction predict_broadcast(BroadcastStrategy strategy, const PLogPParams& params,
                             int nprocs, Bytes message_size,
                             std::optional<Bytes> segment_size = {});

// Scatter models (m is the per-process block size):
//
//   flat tree      (P-1)*g(m) + L
//   chain          sum_{j=1..P-1} g(j*m) + (P-1)*L
//   binomial tree  sum_{j=0..ceil(log2 P)-1} g(2^j*m) + ceil(log2 P)*L
Prediction predict_scatter(ScatterStrategy strategy, const PLogPParams& params,
                           int nprocs, Bytes block_size);

}  // namespace cctune

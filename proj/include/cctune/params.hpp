#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cctune {

using Bytes = std::int64_t;
using Seconds = double;

struct GapEntry {
  Bytes size = 0;
  Seconds gap = 0.0;
  friend bool operator==(const GapEntry&, const GapEntry&) = default;
};

// Gap function g(m): the per-message sender occupancy, sampled at a fixed set
// of message sizes. Lookups interpolate linearly between samples; sizes beyond
// the last sample extrapolate with the slope of the final table segment.
class GapTable {
 public:
  // Entries must be non-empty, strictly increasing in size, start at size 1,
  // and carry positive finite gaps. Throws std::invalid_argument otherwise.
  explicit GapTable(std::vector<GapEntry> entries);

  // g at `size`, exact at sampled sizes. Throws std::invalid_argument for size < 1.
  Seconds at(Bytes size) const;

  const std::vector<GapEntry>& entries() const { return entries_; }

  // True when gaps are non-decreasing in size.
  bool monotone() const;

  friend bool operator==(const GapTable&, const GapTable&) = default;

 private:
  std::vector<GapEntry> entries_;
};

struct PLogPParams {
  Seconds latency = 0.0;  // L
  GapTable gaps;          // g(m)
  std::string label;

  PLogPParams(Seconds latency, GapTable gaps, std::string label = "");

  Seconds gap(Bytes size) const { return gaps.at(size); }

  friend bool operator==(const PLogPParams&, const PLogPParams&) = default;
};

Seconds gap_of(const PLogPParams& params, Bytes size);

struct SegmentSpec {
  Bytes segment_size = 0;          // s, clamped to the message size
  std::int64_t segment_count = 0;  // k = ceil(m / s)
  friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

// Split a message into segments of at most `segment_size` bytes. The final
// segment may be short; a segment size >= the message yields a single segment
// with the size clamped to the message.
SegmentSpec segments_for(Bytes message_size, Bytes segment_size);

// Parameter file I/O. The file is a single JSON object:
//
//   {
//     "version": 1,
//     "label":   "my-cluster",                          (optional)
//     "latency": 5.0e-05,                               (seconds)
//     "gaps":    [[1, 2.0e-05], [1024, 1.0e-04], ...]   ([size_bytes, gap_seconds])
//   }
//
// Gap sizes must be strictly increasing and start at 1. Unknown top-level
// keys are rejected. Errors are reported as std::runtime_error with a
// message naming the offending key or entry.
PLogPParams load_params(const std::string& text);
std::string save_params(const PLogPParams& params);

// Affine synthetic network: g(m) = overhead + m / bandwidth, sampled at
// size 1 plus every requested sample size.
PLogPParams synth_params(Seconds overhead, double bandwidth_bytes_per_s,
                         Seconds latency, std::span<const Bytes> sample_sizes,
                         std::string label = "synthetic");

// Non-fatal diagnostics for a loaded parameter set (e.g. a gap table whose
// gaps decrease with size).
std::vector<std::string> param_warnings(const PLogPParams& params);

}  // namespace cctune

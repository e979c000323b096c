#include "cctune/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace cctune {

namespace {

using ordered_json = nlohmann::ordered_json;

void validate_entries(const std::vector<GapEntry>& entries) {
  if (entries.empty()) {
    throw std::invalid_argument("gap table is empty");
  }
  if (entries.front().size != 1) {
    throw std::invalid_argument("gap table: g(1) required as the first entry");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const GapEntry& e = entries[i];
    if (!(e.gap > 0.0) || !std::isfinite(e.gap)) {
      throw std::invalid_argument("gap table entry " + std::to_string(i) +
                                  " (size " + std::to_string(e.size) +
                                  "): gap must be a positive finite number");
    }
    if (i > 0 && entries[i - 1].size >= e.size) {
      throw std::invalid_argument("gap table entry " + std::to_string(i) +
                                  ": sizes not strictly increasing");
    }
  }
}

}  // namespace

GapTable::GapTable(std::vector<GapEntry> entries) : entries_(std::move(entries)) {
  validate_entries(entries_);
}

Seconds GapTable::at(Bytes size) const {
  if (size < 1) {
    throw std::invalid_argument("gap lookup: size must be >= 1, got " +
                                std::to_string(size));
  }
  if (size <= entries_.front().size) return entries_.front().gap;
  if (entries_.size() == 1) return entries_.front().gap;

  auto hi = std::lower_bound(
      entries_.begin(), entries_.end(), size,
      [](const GapEntry& e, Bytes v) { return e.size < v; });
  if (hi != entries_.end() && hi->size == size) return hi->gap;
  if (hi == entries_.end()) --hi;  // extrapolate with the last segment's slope
  auto lo = hi - 1;

  const double slope = (hi->gap - lo->gap) / static_cast<double>(hi->size - lo->size);
  const double value = lo->gap + slope * static_cast<double>(size - lo->size);
  // A decreasing tail could extrapolate to zero or below; occupancy stays positive.
  return std::max(value, std::numeric_limits<double>::min());
}

bool GapTable::monotone() const {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].gap < entries_[i - 1].gap) return false;
  }
  return true;
}

PLogPParams::PLogPParams(Seconds latency, GapTable gaps, std::string label)
    : latency(latency), gaps(std::move(gaps)), label(std::move(label)) {
  if (!std::isfinite(this->latency) || this->latency < 0.0) {
    throw std::invalid_argument("latency must be a non-negative finite number");
  }
}

Seconds gap_of(const PLogPParams& params, Bytes size) { return params.gap(size); }

SegmentSpec segments_for(Bytes message_size, Bytes segment_size) {
  if (message_size < 1) {
    throw std::invalid_argument("message size must be >= 1, got " +
                                std::to_string(message_size));
  }
  if (segment_size < 1) {
    throw std::invalid_argument("segment size must be >= 1, got " +
                                std::to_string(segment_size));
  }
  const Bytes s = std::min(segment_size, message_size);
  return SegmentSpec{s, (message_size + s - 1) / s};
}

PLogPParams load_params(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw std::runtime_error(std::string("params: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::runtime_error("params: top-level value must be an object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "version" && key != "label" && key != "latency" && key != "gaps") {
      throw std::runtime_error("params: unknown key \"" + key + "\"");
    }
  }

  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw std::runtime_error("params: key \"version\" missing or not an integer");
  }
  if (doc["version"].get<int>() != 1) {
    throw std::runtime_error("params: unsupported version " +
                             doc["version"].dump());
  }

  if (!doc.contains("latency") || !doc["latency"].is_number()) {
    throw std::runtime_error("params: key \"latency\" missing or not a number");
  }
  const Seconds latency = doc["latency"].get<double>();

  std::string label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) {
      throw std::runtime_error("params: key \"label\" must be a string");
    }
    label = doc["label"].get<std::string>();
  }

  if (!doc.contains("gaps") || !doc["gaps"].is_array()) {
    throw std::runtime_error("params: key \"gaps\" missing or not an array");
  }
  std::vector<GapEntry> entries;
  entries.reserve(doc["gaps"].size());
  std::size_t index = 0;
  for (const auto& item : doc["gaps"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
        !item[1].is_number()) {
      throw std::runtime_error("params: gaps[" + std::to_string(index) +
                               "] must be a [size_bytes, gap_seconds] pair");
    }
    entries.push_back(GapEntry{item[0].get<Bytes>(), item[1].get<double>()});
    ++index;
  }

  try {
    return PLogPParams(latency, GapTable(std::move(entries)), std::move(label));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("params: ") + e.what());
  }
}

std::string save_params(const PLogPParams& params) {
  ordered_json doc;
  doc["version"] = 1;
  if (!params.label.empty()) doc["label"] = params.label;
  doc["latency"] = params.latency;
  ordered_json gaps = ordered_json::array();
  for (const GapEntry& e : params.gaps.entries()) {
    gaps.push_back(ordered_json::array({e.size, e.gap}));
  }
  doc["gaps"] = std::move(gaps);
  return doc.dump(2) + "\n";
}

PLogPParams synth_params(Seconds overhead, double bandwidth_bytes_per_s,
                         Seconds latency, std::span<const Bytes> sample_sizes,
                         std::string label) {
  if (!(bandwidth_bytes_per_s > 0.0) || !std::isfinite(bandwidth_bytes_per_s)) {
    throw std::invalid_argument("bandwidth must be a positive finite number");
  }
  if (!(overhead > 0.0) || !std::isfinite(overhead)) {
    throw std::invalid_argument("overhead must be a positive finite number");
  }
  std::vector<Bytes> sizes(sample_sizes.begin(), sample_sizes.end());
  sizes.push_back(1);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<GapEntry> entries;
  entries.reserve(sizes.size());
  for (Bytes size : sizes) {
    if (size < 1) {
      throw std::invalid_argument("sample sizes must be >= 1, got " +
                                  std::to_string(size));
    }
    entries.push_back(
        GapEntry{size, overhead + static_cast<double>(size) / bandwidth_bytes_per_s});
  }
  return PLogPParams(latency, GapTable(std::move(entries)), std::move(label));
}

std::vector<std::string> param_warnings(const PLogPParams& params) {
  std::vector<std::string> warnings;
  if (!params.gaps.monotone()) {
    warnings.push_back(
        "gap table is not monotone: g(m) decreases somewhere; extrapolation "
        "past the last sample is clamped to stay positive");
  }
  if (params.latency == 0.0) {
    warnings.push_back("latency is zero; rendezvous handshakes cost only gaps");
  }
  return warnings;
}

}  // namespace cctune

// Copyright 2026 The magcoloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Domain types shared by the whole pipeline: raw 3-axis magnetometer traces,
// scalar-magnitude trajectories, warp paths and match reports.

#ifndef MAGCOLOC_MODEL_HPP_
#define MAGCOLOC_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magcoloc/error.hpp"

namespace magcoloc {

// The activity taxonomy reported by the phone's activity recognizer.
enum class ActivityLabel {
  kWalking,
  kRunning,
  kStill,
  kOnFoot,
  kOnBicycle,
  kInVehicle,
  kTilting,
  kUnknown,
};

inline constexpr std::array<std::pair<ActivityLabel, std::string_view>, 8>
    kActivityNames{{
        {ActivityLabel::kWalking, "Walking"},
        {ActivityLabel::kRunning, "Running"},
        {ActivityLabel::kStill, "Still"},
        {ActivityLabel::kOnFoot, "OnFoot"},
        {ActivityLabel::kOnBicycle, "OnBicycle"},
        {ActivityLabel::kInVehicle, "InVehicle"},
        {ActivityLabel::kTilting, "Tilting"},
        {ActivityLabel::kUnknown, "Unknown"},
    }};

constexpr std::string_view to_string(ActivityLabel label) {
  for (const auto& [value, name] : kActivityNames) {
    if (value == label) return name;
  }
  return "Unknown";
}

inline ActivityLabel parse_activity(std::string_view name) {
  for (const auto& [value, text] : kActivityNames) {
    if (text == name) return value;
  }
  throw Error(ErrorKind::kInvalidInput,
              "unknown activity label '" + std::string(name) + "'");
}

// Walking is nested under OnFoot in the recognizer taxonomy; both delimit
// vehicle episodes.
constexpr bool is_on_foot(ActivityLabel label) {
  return label == ActivityLabel::kOnFoot || label == ActivityLabel::kWalking;
}

struct MagneticSample {
  std::int64_t t_ms = 0;  // epoch milliseconds, device-local clock
  double mx = 0.0;        // microtesla
  double my = 0.0;
  double mz = 0.0;
  ActivityLabel activity = ActivityLabel::kUnknown;

  bool operator==(const MagneticSample&) const = default;
};

// One device's recording. `clock_offset_ms` is added to every local
// timestamp to obtain reference time.
struct Trace {
  std::string device_id;
  std::int64_t clock_offset_ms = 0;
  std::vector<MagneticSample> samples;

  bool operator==(const Trace&) const = default;
};

// Throws kInvalidInput unless the trace has an id, non-negative timestamps
// that strictly increase, and kRejectedInput on non-finite axis values.
inline void validate(const Trace& trace) {
  detail::require(!trace.device_id.empty(), ErrorKind::kInvalidInput,
                  "trace device_id is empty");
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    const MagneticSample& s = trace.samples[k];
    detail::require(s.t_ms >= 0, ErrorKind::kInvalidInput,
                    "sample timestamp is negative");
    detail::require(
        std::isfinite(s.mx) && std::isfinite(s.my) && std::isfinite(s.mz),
        ErrorKind::kRejectedInput, "sample has non-finite axis value");
    if (k > 0 && s.t_ms <= trace.samples[k - 1].t_ms) {
      throw Error(ErrorKind::kInvalidInput,
                  "trace timestamps are not strictly increasing at sample " +
                      std::to_string(k));
    }
  }
}

// A uniformly sampled scalar-magnitude series for one vehicle episode.
class Trajectory {
 public:
  Trajectory(std::string trace_id, std::int64_t start_ms,
             double sample_rate_hz, std::vector<double> values)
      : trace_id_(std::move(trace_id)),
        start_ms_(start_ms),
        sample_rate_hz_(sample_rate_hz),
        values_(std::move(values)) {
    detail::require(values_.size() >= 2, ErrorKind::kInvalidArgument,
                    "trajectory needs at least two samples");
    detail::require(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0,
                    ErrorKind::kInvalidArgument,
                    "trajectory sample rate must be positive");
    for (double v : values_) {
      detail::require(std::isfinite(v) && v >= 0.0,
                      ErrorKind::kInvalidArgument,
                      "trajectory magnitudes must be finite and >= 0");
    }
  }

  const std::string& trace_id() const { return trace_id_; }
  std::int64_t start_ms() const { return start_ms_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double duration_s() const {
    return static_cast<double>(values_.size() - 1) / sample_rate_hz_;
  }

  bool operator==(const Trajectory&) const = default;

 private:
  std::string trace_id_;
  std::int64_t start_ms_;
  double sample_rate_hz_;
  std::vector<double> values_;
};

// 0-based cell of the alignment grid; (0, 0) is the first sample pair.
struct IndexPair {
  std::size_t i = 0;
  std::size_t j = 0;

  bool operator==(const IndexPair&) const = default;
};

// A monotone, continuous alignment of a length-N series against a length-M
// series, running from (0, 0) to (N-1, M-1). Each step advances i, j or
// both by exactly one.
class WarpPath {
 public:
  WarpPath(std::vector<IndexPair> pairs, std::size_t rows, std::size_t cols)
      : pairs_(std::move(pairs)), rows_(rows), cols_(cols) {
    detail::require(rows_ >= 1 && cols_ >= 1, ErrorKind::kInvalidArgument,
                    "warp path over an empty series");
    detail::require(!pairs_.empty(), ErrorKind::kInvalidArgument,
                    "warp path is empty");
    detail::require(pairs_.front() == IndexPair{0, 0},
                    ErrorKind::kInvalidArgument,
                    "warp path must start at the first sample pair");
    detail::require(pairs_.back() == IndexPair{rows_ - 1, cols_ - 1},
                    ErrorKind::kInvalidArgument,
                    "warp path must end at the last sample pair");
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const IndexPair& prev = pairs_[k - 1];
      const IndexPair& cur = pairs_[k];
      const bool di_ok = cur.i == prev.i || cur.i == prev.i + 1;
      const bool dj_ok = cur.j == prev.j || cur.j == prev.j + 1;
      detail::require(di_ok && dj_ok && !(cur == prev),
                      ErrorKind::kInvalidArgument,
                      "warp path violates monotonicity or continuity");
    }
  }

  const std::vector<IndexPair>& pairs() const { return pairs_; }
  std::size_t length() const { return pairs_.size(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  WarpPath transposed() const {
    std::vector<IndexPair> swapped;
    swapped.reserve(pairs_.size());
    for (const IndexPair& p : pairs_) swapped.push_back({p.j, p.i});
    return WarpPath(std::move(swapped), cols_, rows_);
  }

  bool operator==(const WarpPath&) const = default;

 private:
  std::vector<IndexPair> pairs_;
  std::size_t rows_;
  std::size_t cols_;
};

// Series on which the local cost (or the normalized score) is evaluated.
enum class CostSpace { kRaw, kDerivative };

constexpr std::string_view to_string(CostSpace space) {
  return space == CostSpace::kRaw ? "raw" : "derivative";
}

inline CostSpace parse_cost_space(std::string_view name) {
  if (name == "raw") return CostSpace::kRaw;
  if (name == "derivative") return CostSpace::kDerivative;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown score space '" + std::string(name) + "'");
}

// Acceptance limits for a candidate pair.
struct Thresholds {
  double max_temporal_offset_s = 5.0;
  double max_compression_rate = 1.5;
  double max_ddtw_score = 5.0;

  void validate() const {
    detail::require(max_temporal_offset_s > 0.0 && max_compression_rate > 0.0 &&
                        max_ddtw_score > 0.0,
                    ErrorKind::kInvalidArgument,
                    "thresholds must be strictly positive");
  }

  bool operator==(const Thresholds&) const = default;
};

struct HeuristicVerdicts {
  bool temporal = false;
  bool compression = false;
  bool score = false;

  bool all() const { return temporal && compression && score; }
  bool operator==(const HeuristicVerdicts&) const = default;
};

// Outcome of comparing one trajectory pair. `ddtw_score` and `warp_path`
// are empty when a pre-filter rejected the pair before alignment.
struct MatchReport {
  std::string trajectory_a;
  std::string trajectory_b;
  std::optional<double> ddtw_score;
  double compression_rate = 1.0;
  double temporal_offset_s = 0.0;
  HeuristicVerdicts verdicts;
  bool accepted = false;
  std::optional<WarpPath> warp_path;

  bool operator==(const MatchReport&) const = default;
};

}  // namespace magcoloc

#endif  // MAGCOLOC_MODEL_HPP_

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

// Pairwise trajectory comparison between two users and the three acceptance
// heuristics: start-time offset, compression rate and DDTW score.

#ifndef MAGCOLOC_MATCHING_HPP_
#define MAGCOLOC_MATCHING_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "magcoloc/alignment.hpp"
#include "magcoloc/error.hpp"
#include "magcoloc/model.hpp"
#include "magcoloc/signal.hpp"

namespace magcoloc {

enum class RejectionReason { kTemporalOffset, kCompressionRate, kDdtwScore };

constexpr std::string_view to_string(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::kTemporalOffset: return "TemporalOffset";
    case RejectionReason::kCompressionRate: return "CompressionRate";
    case RejectionReason::kDdtwScore: return "DdtwScore";
  }
  return "Unknown";
}

inline RejectionReason parse_rejection_reason(std::string_view name) {
  if (name == "TemporalOffset") return RejectionReason::kTemporalOffset;
  if (name == "CompressionRate") return RejectionReason::kCompressionRate;
  if (name == "DdtwScore") return RejectionReason::kDdtwScore;
  throw Error(ErrorKind::kInvalidInput,
              "unknown rejection reason '" + std::string(name) + "'");
}

// `rejection_reasons` is empty iff the pair was accepted.
struct PairDecision {
  MatchReport report;
  std::vector<RejectionReason> rejection_reasons;

  bool operator==(const PairDecision&) const = default;
};

struct MatchConfig {
  std::size_t decimation_factor = kDefaultDecimationFactor;
  // Sakoe-Chiba radius in decimated samples; widened per pair to the length
  // difference so every pair stays alignable.
  std::optional<std::size_t> band;
  CostSpace score_space = CostSpace::kDerivative;
  bool ignore_timestamps = false;
  // Run the timestamp and compression checks before aligning. Disabling it
  // aligns every pair; the accepted set is identical.
  bool prefilter = true;
  bool keep_paths = false;
  std::size_t workers = 1;

  void validate() const {
    detail::require(decimation_factor >= 1, ErrorKind::kInvalidArgument,
                    "decimation factor must be >= 1");
    detail::require(!band || *band >= 1, ErrorKind::kInvalidArgument,
                    "band radius must be positive");
    detail::require(workers >= 1, ErrorKind::kInvalidArgument,
                    "need at least one worker");
  }

  bool operator==(const MatchConfig&) const = default;
};

inline double compression_rate(std::size_t len_a, std::size_t len_b) {
  detail::require(len_a >= 1 && len_b >= 1, ErrorKind::kInvalidArgument,
                  "compression rate of an empty trajectory");
  const auto [lo, hi] = std::minmax(len_a, len_b);
  return static_cast<double>(hi) / static_cast<double>(lo);
}

// Seconds between the two trajectory start times.
inline double temporal_offset(const Trajectory& a, const Trajectory& b) {
  const std::int64_t gap = a.start_ms() - b.start_ms();
  return static_cast<double>(gap < 0 ? -gap : gap) / 1000.0;
}

namespace detail {

// Fills verdicts, acceptance and reasons from the numbers already in
// `report`. A missing score counts as not passed but is not listed as a
// reason, since the score check never ran.
inline PairDecision decide(MatchReport report, const Thresholds& thresholds,
                           bool ignore_timestamps) {
  HeuristicVerdicts& v = report.verdicts;
  v.temporal = ignore_timestamps ||
               report.temporal_offset_s < thresholds.max_temporal_offset_s;
  v.compression = report.compression_rate <= thresholds.max_compression_rate;
  v.score = report.ddtw_score && *report.ddtw_score <= thresholds.max_ddtw_score;
  report.accepted = v.all();

  PairDecision decision{std::move(report), {}};
  if (!v.temporal) {
    decision.rejection_reasons.push_back(RejectionReason::kTemporalOffset);
  }
  if (!v.compression) {
    decision.rejection_reasons.push_back(RejectionReason::kCompressionRate);
  }
  if (decision.report.ddtw_score && !v.score) {
    decision.rejection_reasons.push_back(RejectionReason::kDdtwScore);
  }
  return decision;
}

}  // namespace detail

// Applies all three heuristics to an aligned pair. `alignment` must come from
// aligning `a` against `b` (in that order).
inline PairDecision validate_pair(const Trajectory& a, const Trajectory& b,
                                  const AlignmentResult& alignment,
                                  const Thresholds& thresholds,
                                  bool ignore_timestamps = false) {
  thresholds.validate();
  detail::require(alignment.path.rows() == a.size() &&
                      alignment.path.cols() == b.size(),
                  ErrorKind::kInvalidArgument,
                  "alignment was not computed on this trajectory pair");
  MatchReport report;
  report.trajectory_a = a.trace_id();
  report.trajectory_b = b.trace_id();
  report.temporal_offset_s = temporal_offset(a, b);
  report.compression_rate = compression_rate(a.size(), b.size());
  report.ddtw_score = alignment.normalized_score;
  report.warp_path = alignment.path;
  return detail::decide(std::move(report), thresholds, ignore_timestamps);
}

namespace detail {

inline PairDecision evaluate_pair(const Trajectory& a, const Trajectory& b,
                                  const Thresholds& thresholds,
                                  const MatchConfig& config) {
  MatchReport report;
  report.trajectory_a = a.trace_id();
  report.trajectory_b = b.trace_id();
  report.temporal_offset_s = temporal_offset(a, b);
  report.compression_rate = compression_rate(a.size(), b.size());

  const bool temporal_ok =
      config.ignore_timestamps ||
      report.temporal_offset_s < thresholds.max_temporal_offset_s;
  const bool compression_ok =
      report.compression_rate <= thresholds.max_compression_rate;
  if (config.prefilter && !(temporal_ok && compression_ok)) {
    return decide(std::move(report), thresholds, config.ignore_timestamps);
  }

  std::optional<std::size_t> band = config.band;
  if (band) {
    const std::size_t gap =
        a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    band = std::max(*band, gap);
  }
  AlignmentResult alignment =
      ddtw(a.values(), b.values(), band, config.score_space);
  report.ddtw_score = alignment.normalized_score;
  if (config.keep_paths) report.warp_path = std::move(alignment.path);
  return decide(std::move(report), thresholds, config.ignore_timestamps);
}

}  // namespace detail

// Compares every trajectory of one user with every trajectory of the other,
// once per unordered pair. Trajectories are decimated by the configured
// factor before any check. Output is sorted by (a id, b id) and does not
// depend on the worker count.
inline std::vector<PairDecision> match_users(
    const std::vector<Trajectory>& user_a,
    const std::vector<Trajectory>& user_b, const Thresholds& thresholds = {},
    const MatchConfig& config = {}) {
  thresholds.validate();
  config.validate();
  if (user_a.empty() || user_b.empty()) return {};

  auto reduce = [&](const std::vector<Trajectory>& in) {
    std::vector<Trajectory> out;
    out.reserve(in.size());
    for (const Trajectory& t : in) {
      out.push_back(decimate(t, config.decimation_factor));
    }
    return out;
  };
  const std::vector<Trajectory> a = reduce(user_a);
  const std::vector<Trajectory> b = reduce(user_b);

  const std::size_t total = a.size() * b.size();
  std::vector<std::optional<PairDecision>> slots(total);
  auto run = [&](std::size_t k) {
    slots[k] = detail::evaluate_pair(a[k / b.size()], b[k % b.size()],
                                     thresholds, config);
  };

  const std::size_t workers = std::min(config.workers, total);
  if (workers <= 1) {
    for (std::size_t k = 0; k < total; ++k) run(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < total; k = next++) run(k);
        } catch (...) {
          failures[w] = std::current_exception();
          next = total;
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  std::vector<PairDecision> decisions;
  decisions.reserve(total);
  for (auto& slot : slots) decisions.push_back(std::move(*slot));
  std::stable_sort(decisions.begin(), decisions.end(),
                   [](const PairDecision& x, const PairDecision& y) {
                     if (x.report.trajectory_a != y.report.trajectory_a) {
                       return x.report.trajectory_a < y.report.trajectory_a;
                     }
                     return x.report.trajectory_b < y.report.trajectory_b;
                   });
  return decisions;
}

}  // namespace magcoloc

#endif  // MAGCOLOC_MATCHING_HPP_

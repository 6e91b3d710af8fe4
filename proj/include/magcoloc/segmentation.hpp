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

#ifndef MAGCOLOC_SEGMENTATION_HPP_
#define MAGCOLOC_SEGMENTATION_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "magcoloc/error.hpp"
#include "magcoloc/model.hpp"
#include "magcoloc/signal.hpp"

namespace magcoloc {

struct SegmentationConfig {
  double min_vehicle_duration_s = 60.0;
  double activity_debounce_s = 10.0;
  std::size_t smoothing_window = kDefaultSmoothingWindow;

  void validate() const {
    detail::require(min_vehicle_duration_s > 0.0 && activity_debounce_s > 0.0,
                    ErrorKind::kInvalidArgument,
                    "segmentation durations must be strictly positive");
    detail::require(smoothing_window >= 1, ErrorKind::kInvalidArgument,
                    "smoothing window must be positive");
  }
};

// A run of consecutive samples sharing one activity label, [begin, end).
struct ActivityEpisode {
  ActivityLabel label = ActivityLabel::kUnknown;
  std::size_t begin = 0;
  std::size_t end = 0;
};

namespace detail {

// An episode lasts until the next episode starts; the final one until the
// last sample.
inline std::int64_t episode_duration_ms(const std::vector<MagneticSample>& s,
                                        const ActivityEpisode& ep) {
  const std::size_t stop = ep.end < s.size() ? ep.end : s.size() - 1;
  return s[stop].t_ms - s[ep.begin].t_ms;
}

}  // namespace detail

// Groups samples into label runs and folds runs shorter than `debounce_s`
// into the preceding run (the following one for a short leading run).
inline std::vector<ActivityEpisode> debounced_episodes(
    const std::vector<MagneticSample>& samples, double debounce_s) {
  std::vector<ActivityEpisode> raw;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (raw.empty() || raw.back().label != samples[k].activity) {
      raw.push_back({samples[k].activity, k, k + 1});
    } else {
      raw.back().end = k + 1;
    }
  }

  const double debounce_ms = debounce_s * 1000.0;
  std::vector<ActivityEpisode> merged;
  for (const ActivityEpisode& ep : raw) {
    const bool short_run =
        static_cast<double>(detail::episode_duration_ms(samples, ep)) <
        debounce_ms;
    if (!merged.empty() && (ep.label == merged.back().label || short_run)) {
      merged.back().end = ep.end;
    } else {
      merged.push_back(ep);
    }
  }
  if (merged.size() >= 2 &&
      static_cast<double>(detail::episode_duration_ms(samples, merged[0])) <
          debounce_ms) {
    merged[1].begin = merged[0].begin;
    merged.erase(merged.begin());
  }
  return merged;
}

// Splits a trace into one smoothed magnitude trajectory per vehicle ride. A
// ride is an InVehicle episode directly preceded by an on-foot episode; it
// runs until the next on-foot episode, absorbing any Still/Tilting/Unknown
// episodes in between. Rides with no closing on-foot episode, or shorter
// than `min_vehicle_duration_s`, are dropped.
inline std::vector<Trajectory> segment(const Trace& input,
                                       const SegmentationConfig& config = {}) {
  config.validate();
  validate(input);
  const Trace trace = apply_clock_offset(input);
  const auto& samples = trace.samples;
  std::vector<Trajectory> out;
  if (samples.size() < 2) return out;

  const std::vector<ActivityEpisode> episodes =
      debounced_episodes(samples, config.activity_debounce_s);

  std::size_t e = 1;
  while (e < episodes.size()) {
    if (episodes[e].label != ActivityLabel::kInVehicle ||
        !is_on_foot(episodes[e - 1].label)) {
      ++e;
      continue;
    }
    std::size_t f = e + 1;
    while (f < episodes.size() && !is_on_foot(episodes[f].label)) ++f;
    if (f == episodes.size()) break;

    const std::size_t first = episodes[e].begin;
    const std::size_t last = episodes[f].begin - 1;
    e = f + 1;

    const std::int64_t span_ms = samples[last].t_ms - samples[first].t_ms;
    if (static_cast<double>(span_ms) < config.min_vehicle_duration_s * 1000.0) {
      continue;
    }
    const std::size_t count = last - first + 1;
    if (count <= config.smoothing_window + 1) continue;

    std::vector<double> mags;
    mags.reserve(count);
    for (std::size_t k = first; k <= last; ++k) {
      mags.push_back(magnitude(samples[k]));
    }
    const double rate_hz =
        static_cast<double>(count - 1) * 1000.0 / static_cast<double>(span_ms);
    out.emplace_back(trace.device_id + "." + std::to_string(out.size()),
                     samples[first + config.smoothing_window].t_ms, rate_hz,
                     smooth(mags, config.smoothing_window));
  }
  return out;
}

}  // namespace magcoloc

#endif  // MAGCOLOC_SEGMENTATION_HPP_

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

// Signal conditioning: magnitude reduction, trailing moving average,
// decimation, clock correction and autocorrelation diagnostics.

#ifndef MAGCOLOC_SIGNAL_HPP_
#define MAGCOLOC_SIGNAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "magcoloc/error.hpp"
#include "magcoloc/model.hpp"

namespace magcoloc {

inline constexpr std::size_t kDefaultSmoothingWindow = 10;
inline constexpr std::size_t kDefaultDecimationFactor = 10;

// Orientation-invariant field strength of a 3-axis reading.
inline double magnitude(const MagneticSample& sample) {
  detail::require(std::isfinite(sample.mx) && std::isfinite(sample.my) &&
                      std::isfinite(sample.mz),
                  ErrorKind::kRejectedInput, "non-finite magnetometer axis");
  return std::hypot(sample.mx, sample.my, sample.mz);
}

// Trailing moving average that excludes the current sample: output k is the
// mean of values[k .. k+window-1] and stands for input sample k+window. The
// first `window` samples have no full history and are dropped, so the output
// starts `window` sample periods later than the input.
inline std::vector<double> smooth(std::span<const double> values,
                                  std::size_t window = kDefaultSmoothingWindow) {
  detail::require(window >= 1, ErrorKind::kInvalidArgument,
                  "smoothing window must be positive");
  detail::require(values.size() > window, ErrorKind::kSequenceTooShort,
                  "sequence must be longer than the smoothing window");
  const std::size_t out_len = values.size() - window;
  std::vector<double> out(out_len);
  const double scale = static_cast<double>(window);
  for (std::size_t k = 0; k < out_len; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < window; ++j) sum += values[k + j];
    out[k] = sum / scale;
  }
  return out;
}

// Keeps samples 0, factor, 2*factor, ...
inline Trajectory decimate(const Trajectory& traj, std::size_t factor) {
  detail::require(factor >= 1, ErrorKind::kInvalidArgument,
                  "decimation factor must be >= 1");
  if (factor == 1) return traj;
  const auto& values = traj.values();
  detail::require(values.size() >= factor + 1, ErrorKind::kSequenceTooShort,
                  "trajectory too short for decimation factor");
  std::vector<double> kept;
  kept.reserve(values.size() / factor + 1);
  for (std::size_t k = 0; k < values.size(); k += factor) {
    kept.push_back(values[k]);
  }
  return Trajectory(traj.trace_id(), traj.start_ms(),
                    traj.sample_rate_hz() / static_cast<double>(factor),
                    std::move(kept));
}

// Moves every timestamp onto reference time and zeroes the offset.
inline Trace apply_clock_offset(Trace trace) {
  for (MagneticSample& s : trace.samples) s.t_ms += trace.clock_offset_ms;
  trace.clock_offset_ms = 0;
  return trace;
}

struct AutocorrelationSeries {
  std::vector<std::size_t> lags;
  std::vector<double> coefficients;
};

// Biased sample autocorrelation for lags 0..max_lag. A series without
// variance is reported as kDegenerateSeries.
inline AutocorrelationSeries autocorrelation(std::span<const double> values,
                                             std::size_t max_lag) {
  detail::require(max_lag >= 1, ErrorKind::kInvalidArgument,
                  "max_lag must be positive");
  detail::require(values.size() > max_lag + 1, ErrorKind::kSequenceTooShort,
                  "series must be longer than max_lag + 1");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  double scale = 0.0;
  for (double v : values) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= n;

  std::vector<double> centered(values.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    centered[i] = values[i] - mean;
    denom += centered[i] * centered[i];
  }
  // Rounding in the mean leaves a residue of order eps * |value| on a
  // constant series.
  const double floor = 1e-9 * std::max(scale, 1.0);
  if (!(denom > n * floor * floor)) {
    throw Error(ErrorKind::kDegenerateSeries, "series has zero variance");
  }

  AutocorrelationSeries out;
  out.lags.reserve(max_lag + 1);
  out.coefficients.reserve(max_lag + 1);
  out.lags.push_back(0);
  out.coefficients.push_back(1.0);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double num = 0.0;
    for (std::size_t i = 0; i + lag < centered.size(); ++i) {
      num += centered[i] * centered[i + lag];
    }
    out.lags.push_back(lag);
    out.coefficients.push_back(std::clamp(num / denom, -1.0, 1.0));
  }
  return out;
}

}  // namespace magcoloc

#endif  // MAGCOLOC_SIGNAL_HPP_

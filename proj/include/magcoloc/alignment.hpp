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

// Elastic alignment of scalar series: lock-step Euclidean baseline, DTW,
// derivative DTW, warp-path recovery and an exhaustive reference aligner.

#ifndef MAGCOLOC_ALIGNMENT_HPP_
#define MAGCOLOC_ALIGNMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "magcoloc/error.hpp"
#include "magcoloc/model.hpp"

namespace magcoloc {

struct AlignmentResult {
  double distance = 0.0;          // accumulated squared local cost
  double normalized_score = 0.0;  // mean |difference| along the path
  WarpPath path;
  CostSpace cost_space = CostSpace::kRaw;
};

// Slope estimate averaging the backward difference with the centered one:
// d[i] = ((m[i] - m[i-1]) + (m[i+1] - m[i-1]) / 2) / 2 for interior i. The
// end points copy their interior neighbour so the output keeps the input
// length.
inline std::vector<double> derivative_estimate(std::span<const double> values) {
  detail::require(values.size() >= 3, ErrorKind::kSequenceTooShort,
                  "derivative estimate needs at least three values");
  const std::size_t n = values.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = ((values[i] - values[i - 1]) +
            ((values[i + 1] - values[i - 1]) / 2.0)) /
           2.0;
  }
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

// Sum of squared differences between equal-length series.
inline double euclidean_lockstep(std::span<const double> a,
                                 std::span<const double> b) {
  detail::require(a.size() == b.size(), ErrorKind::kInvalidArgument,
                  "lock-step distance needs equal lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

// Accumulated squared cost of `path`, summed in path order.
inline double path_cost(std::span<const double> x, std::span<const double> y,
                        const WarpPath& path) {
  detail::require(path.rows() == x.size() && path.cols() == y.size(),
                  ErrorKind::kInvalidArgument,
                  "warp path does not fit the series");
  double sum = 0.0;
  for (const IndexPair& p : path.pairs()) {
    const double diff = x[p.i] - y[p.j];
    sum += diff * diff;
  }
  return sum;
}

// Mean absolute difference of aligned samples.
inline double path_score(std::span<const double> x, std::span<const double> y,
                         const WarpPath& path) {
  detail::require(path.rows() == x.size() && path.cols() == y.size(),
                  ErrorKind::kInvalidArgument,
                  "warp path does not fit the series");
  double sum = 0.0;
  for (const IndexPair& p : path.pairs()) sum += std::abs(x[p.i] - y[p.j]);
  return sum / static_cast<double>(path.length());
}

namespace detail {

enum Step : std::uint8_t { kStart = 0, kDiag = 1, kUp = 2, kLeft = 3, kNone = 0xFF };

// Columns of row i (0-based) inside the band |(i+1)*M/N - (j+1)| <= radius,
// evaluated in exact integer arithmetic as |(i+1)*M - (j+1)*N| <= radius*N.
struct BandRows {
  std::size_t n;
  std::size_t m;
  std::optional<std::size_t> radius;

  std::pair<std::size_t, std::size_t> columns(std::size_t i) const {
    if (!radius) return {0, m - 1};
    const auto N = static_cast<std::int64_t>(n);
    const auto M = static_cast<std::int64_t>(m);
    const auto R = static_cast<std::int64_t>(*radius);
    const std::int64_t centre = (static_cast<std::int64_t>(i) + 1) * M;
    // smallest j1 with j1*N >= centre - R*N, largest with j1*N <= centre + R*N
    const std::int64_t low_num = centre - R * N;
    const std::int64_t lo1 =
        low_num <= 0 ? 1 : std::max<std::int64_t>(1, (low_num + N - 1) / N);
    const std::int64_t hi1 = std::min<std::int64_t>(M, (centre + R * N) / N);
    if (lo1 > hi1) return {1, 0};  // empty
    return {static_cast<std::size_t>(lo1 - 1), static_cast<std::size_t>(hi1 - 1)};
  }
};

inline std::optional<std::size_t> checked_band(std::size_t n, std::size_t m,
                                               std::optional<std::size_t> band) {
  detail::require(n >= 1 && m >= 1, ErrorKind::kInvalidArgument,
                  "alignment input is empty");
  if (!band) return std::nullopt;
  detail::require(*band >= 1, ErrorKind::kInvalidArgument,
                  "band radius must be positive");
  const std::size_t gap = n > m ? n - m : m - n;
  if (*band < gap) {
    throw Error(ErrorKind::kInfeasibleBand,
                "band radius is smaller than the length difference");
  }
  // Any radius >= max(N, M) admits every cell.
  if (*band >= std::max(n, m)) return std::nullopt;
  return band;
}

// Three-neighbour DTW recurrence over squared differences. Ties prefer the
// diagonal predecessor, then (i-1, j). When `steps` is non-null it receives
// the argmin predecessor of every cell (row-major) for path recovery;
// otherwise only two rows are kept.
inline double accumulate(std::span<const double> x, std::span<const double> y,
                         std::optional<std::size_t> band,
                         std::vector<std::uint8_t>* steps) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const BandRows rows{n, m, band};
  if (steps) steps->assign(n * m, kNone);

  std::vector<double> prev(m, kInf);
  std::vector<double> cur(m, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = rows.columns(i);
    std::fill(cur.begin(), cur.end(), kInf);
    const double xi = x[i];
    for (std::size_t j = lo; j <= hi && lo <= hi; ++j) {
      const double diff = xi - y[j];
      const double cost = diff * diff;
      double best;
      std::uint8_t step;
      if (i == 0 && j == 0) {
        best = 0.0;
        step = kStart;
      } else {
        best = kInf;
        step = kNone;
        if (i > 0 && j > 0 && prev[j - 1] < best) {
          best = prev[j - 1];
          step = kDiag;
        }
        if (i > 0 && prev[j] < best) {
          best = prev[j];
          step = kUp;
        }
        if (j > 0 && cur[j - 1] < best) {
          best = cur[j - 1];
          step = kLeft;
        }
      }
      if (step == kNone) continue;
      cur[j] = best + cost;
      if (steps) (*steps)[i * m + j] = step;
    }
    std::swap(prev, cur);
  }
  const double total = prev[m - 1];
  if (!std::isfinite(total)) {
    throw Error(ErrorKind::kInfeasibleBand, "band admits no warp path");
  }
  return total;
}

inline WarpPath backtrack(const std::vector<std::uint8_t>& steps, std::size_t n,
                          std::size_t m) {
  std::vector<IndexPair> pairs;
  pairs.reserve(n + m);
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  while (true) {
    pairs.push_back({i, j});
    const std::uint8_t step = steps[i * m + j];
    if (step == kStart) break;
    if (step == kDiag) {
      --i;
      --j;
    } else if (step == kUp) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(pairs.begin(), pairs.end());
  return WarpPath(std::move(pairs), n, m);
}

inline AlignmentResult align(std::span<const double> x,
                             std::span<const double> y,
                             std::optional<std::size_t> band,
                             CostSpace cost_space,
                             std::span<const double> score_x,
                             std::span<const double> score_y) {
  band = checked_band(x.size(), y.size(), band);
  std::vector<std::uint8_t> steps;
  const double distance = accumulate(x, y, band, &steps);
  WarpPath path = backtrack(steps, x.size(), y.size());
  const double score = path_score(score_x, score_y, path);
  return AlignmentResult{distance, score, std::move(path), cost_space};
}

}  // namespace detail

// Optional Sakoe-Chiba radius: cells must satisfy |i*M/N - j| <= band with
// 1-based indices. `band` must be >= |N - M|.
inline AlignmentResult dtw(std::span<const double> a, std::span<const double> b,
                           std::optional<std::size_t> band = std::nullopt) {
  return detail::align(a, b, band, CostSpace::kRaw, a, b);
}

// DTW on derivative estimates. The normalized score is taken in
// `score_space`; raw space uses the original magnitudes along the same path.
inline AlignmentResult ddtw(std::span<const double> a, std::span<const double> b,
                            std::optional<std::size_t> band = std::nullopt,
                            CostSpace score_space = CostSpace::kDerivative) {
  const std::vector<double> da = derivative_estimate(a);
  const std::vector<double> db = derivative_estimate(b);
  if (score_space == CostSpace::kRaw) {
    return detail::align(da, db, band, CostSpace::kDerivative, a, b);
  }
  return detail::align(da, db, band, CostSpace::kDerivative, da, db);
}

// Distance only, O(M) memory.
inline double dtw_distance(std::span<const double> a, std::span<const double> b,
                           std::optional<std::size_t> band = std::nullopt) {
  band = detail::checked_band(a.size(), b.size(), band);
  return detail::accumulate(a, b, band, nullptr);
}

inline double ddtw_distance(std::span<const double> a,
                            std::span<const double> b,
                            std::optional<std::size_t> band = std::nullopt) {
  const std::vector<double> da = derivative_estimate(a);
  const std::vector<double> db = derivative_estimate(b);
  return dtw_distance(da, db, band);
}

inline constexpr std::size_t kOracleMaxTotalLength = 16;

// Reference aligner for tests: enumerates every warp path and keeps the
// cheapest (first found on ties). Exponential; |a| + |b| <= 16.
inline AlignmentResult brute_force_align(std::span<const double> a,
                                         std::span<const double> b,
                                         CostSpace cost_space) {
  detail::require(!a.empty() && !b.empty(), ErrorKind::kInvalidArgument,
                  "alignment input is empty");
  if (a.size() + b.size() > kOracleMaxTotalLength) {
    throw Error(ErrorKind::kOracleSizeExceeded,
                "brute-force alignment limited to |a| + |b| <= 16");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  if (cost_space == CostSpace::kDerivative) {
    x = derivative_estimate(a);
    y = derivative_estimate(b);
  }
  const std::size_t n = x.size();
  const std::size_t m = y.size();

  std::vector<IndexPair> current;
  std::vector<IndexPair> best_path;
  double best = std::numeric_limits<double>::infinity();

  // Depth-first walk; `sum` is accumulated in path order.
  auto walk = [&](auto&& self, std::size_t i, std::size_t j, double sum) -> void {
    const double diff = x[i] - y[j];
    sum += diff * diff;
    current.push_back({i, j});
    if (i == n - 1 && j == m - 1) {
      if (sum < best) {
        best = sum;
        best_path = current;
      }
    } else {
      if (i + 1 < n && j + 1 < m) self(self, i + 1, j + 1, sum);
      if (i + 1 < n) self(self, i + 1, j, sum);
      if (j + 1 < m) self(self, i, j + 1, sum);
    }
    current.pop_back();
  };
  walk(walk, 0, 0, 0.0);

  WarpPath path(std::move(best_path), n, m);
  const double score = path_score(x, y, path);
  return AlignmentResult{best, score, std::move(path), cost_space};
}

}  // namespace magcoloc

#endif  // MAGCOLOC_ALIGNMENT_HPP_

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

#ifndef MAGCOLOC_TESTS_TEST_UTIL_HPP_
#define MAGCOLOC_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "magcoloc/magcoloc.hpp"

namespace testutil {

inline std::vector<double> random_series(std::mt19937_64& gen, std::size_t n,
                                         double lo = -10.0, double hi = 10.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

// Textbook full-matrix DTW with squared cost; no band, no path.
inline double reference_dtw(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = x.size(), m = y.size();
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(m + 1, inf));
  d[0][0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double c = (x[i - 1] - y[j - 1]) * (x[i - 1] - y[j - 1]);
      d[i][j] = c + std::min({d[i - 1][j - 1], d[i - 1][j], d[i][j - 1]});
    }
  }
  return d[n][m];
}

// Same recurrence restricted to 1-based cells with |i*M/N - j| <= band.
inline double reference_banded_dtw(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   std::size_t band) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = x.size(), m = y.size();
  auto inside = [&](std::size_t i, std::size_t j) {
    const double lhs = std::abs(static_cast<double>(i) * m - static_cast<double>(j) * n);
    return lhs <= static_cast<double>(band) * n;
  };
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(m + 1, inf));
  d[0][0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (!inside(i, j)) continue;
      const double c = (x[i - 1] - y[j - 1]) * (x[i - 1] - y[j - 1]);
      d[i][j] = c + std::min({d[i - 1][j - 1], d[i - 1][j], d[i][j - 1]});
    }
  }
  return d[n][m];
}

// Derivative estimate written out by hand, endpoints copied inward. n >= 3.
inline std::vector<double> reference_derivative(const std::vector<double>& m) {
  const std::size_t n = m.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = ((m[i] - m[i - 1]) + (m[i + 1] - m[i - 1]) / 2.0) / 2.0;
  }
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

// Checks boundary, monotonicity, continuity and length of a path.
inline bool path_is_valid(const magcoloc::WarpPath& p, std::size_t n,
                          std::size_t m) {
  const auto& v = p.pairs();
  if (v.empty() || p.rows() != n || p.cols() != m) return false;
  if (v.front().i != 0 || v.front().j != 0) return false;
  if (v.back().i != n - 1 || v.back().j != m - 1) return false;
  if (v.size() > n + m - 1) return false;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const std::size_t di = v[k].i - v[k - 1].i;
    const std::size_t dj = v[k].j - v[k - 1].j;
    if (v[k].i < v[k - 1].i || v[k].j < v[k - 1].j) return false;
    if (di > 1 || dj > 1 || di + dj == 0) return false;
  }
  return true;
}

inline magcoloc::Trajectory make_traj(std::string id, std::int64_t start_ms,
                                      std::vector<double> values,
                                      double rate = 4.965) {
  return magcoloc::Trajectory(std::move(id), start_ms, rate, std::move(values));
}

// Kind of the magcoloc::Error thrown by `f`, or nullopt if none.
template <class F>
std::optional<magcoloc::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const magcoloc::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline bool near_rel(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel * scale || a == b;
}

}  // namespace testutil

#endif  // MAGCOLOC_TESTS_TEST_UTIL_HPP_

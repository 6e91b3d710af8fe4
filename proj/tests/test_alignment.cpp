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

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace magcoloc;
using testutil::error_kind;
using testutil::near_rel;
using testutil::path_is_valid;
using testutil::random_series;

TEST(Derivative, HandCases) {
  EXPECT_EQ(derivative_estimate(std::vector<double>{4, 4, 4, 4}),
            (std::vector<double>{0, 0, 0, 0}));
  const auto d = derivative_estimate(std::vector<double>{0, 1, 3});
  EXPECT_DOUBLE_EQ(d[1], 1.25);
  EXPECT_DOUBLE_EQ(d[0], 1.25);
  EXPECT_DOUBLE_EQ(d[2], 1.25);
  for (double v : derivative_estimate(std::vector<double>{2, 4.5, 7, 9.5, 12})) {
    EXPECT_DOUBLE_EQ(v, 2.5);
  }
  EXPECT_EQ(error_kind([] { derivative_estimate(std::vector<double>{1, 2}); }),
            ErrorKind::kSequenceTooShort);
}

TEST(Derivative, MatchesReference) {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 50; ++k) {
    const auto v = random_series(gen, 3 + k % 20);
    const auto d = derivative_estimate(v);
    const auto r = testutil::reference_derivative(v);
    ASSERT_EQ(d.size(), r.size());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_DOUBLE_EQ(d[i], r[i]);
  }
}

TEST(Lockstep, Basics) {
  const std::vector<double> a{1, 2}, b{2, 4};
  EXPECT_DOUBLE_EQ(euclidean_lockstep(a, b), 5.0);
  EXPECT_EQ(euclidean_lockstep(a, a), 0.0);
  const std::vector<double> c{1, 2, 3};
  EXPECT_EQ(error_kind([&] { euclidean_lockstep(a, c); }),
            ErrorKind::kInvalidArgument);
}

TEST(Dtw, IdenticalIsDiagonal) {
  const std::vector<double> a{3, 1, 4, 1, 5, 9};
  const auto r = dtw(a, a);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.normalized_score, 0.0);
  EXPECT_EQ(r.cost_space, CostSpace::kRaw);
  ASSERT_EQ(r.path.length(), a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(r.path.pairs()[k], (IndexPair{k, k}));
  }
}

TEST(Dtw, HandComputedCase) {
  const std::vector<double> a{0, 0, 1, 0, 0}, b{0, 1, 0};
  const auto r = dtw(a, b);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.distance, brute_force_align(a, b, CostSpace::kRaw).distance);
  EXPECT_TRUE(path_is_valid(r.path, 5, 3));
  // Stretching [1, 2, 3] onto [1, 3]: the middle sample costs 1 either way.
  const auto s = dtw(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3});
  EXPECT_DOUBLE_EQ(s.distance, 1.0);
  EXPECT_EQ(s.path.pairs(), (std::vector<IndexPair>{{0, 0}, {1, 0}, {2, 1}}));
}

TEST(Dtw, SingleCell) {
  const auto r = dtw(std::vector<double>{2}, std::vector<double>{5});
  EXPECT_DOUBLE_EQ(r.distance, 9.0);
  EXPECT_DOUBLE_EQ(r.normalized_score, 3.0);
  EXPECT_EQ(r.path.length(), 1u);
  const auto o = brute_force_align(std::vector<double>{2}, std::vector<double>{5},
                                   CostSpace::kRaw);
  EXPECT_DOUBLE_EQ(o.distance, 9.0);
}

TEST(Dtw, MatchesTextbookReference) {
  std::mt19937_64 gen(99);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_series(gen, 1 + gen() % 40);
    const auto b = random_series(gen, 1 + gen() % 40);
    const auto r = dtw(a, b);
    EXPECT_TRUE(near_rel(r.distance, testutil::reference_dtw(a, b), 1e-12));
    EXPECT_TRUE(near_rel(dtw_distance(a, b), r.distance, 1e-12));
    EXPECT_TRUE(near_rel(path_cost(a, b, r.path), r.distance, 1e-9));
    EXPECT_TRUE(path_is_valid(r.path, a.size(), b.size()));
  }
}

TEST(Dtw, NotAboveLockstep) {
  std::mt19937_64 gen(4);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + gen() % 30;
    const auto a = random_series(gen, n), b = random_series(gen, n);
    EXPECT_LE(dtw(a, b).distance, euclidean_lockstep(a, b));
  }
}

TEST(Dtw, Symmetry) {
  std::mt19937_64 gen(8);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_series(gen, 3 + gen() % 25);
    const auto b = random_series(gen, 3 + gen() % 25);
    const auto ab = dtw(a, b), ba = dtw(b, a);
    EXPECT_TRUE(near_rel(ab.distance, ba.distance, 1e-12));
    const auto dab = ddtw(a, b), dba = ddtw(b, a);
    EXPECT_TRUE(near_rel(dab.distance, dba.distance, 1e-12));
    EXPECT_TRUE(near_rel(path_cost(b, a, ab.path.transposed()), ab.distance, 1e-9));
  }
}

TEST(Dtw, EmptyInput) {
  const std::vector<double> e, a{1};
  EXPECT_EQ(error_kind([&] { dtw(e, a); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(error_kind([&] { brute_force_align(a, e, CostSpace::kRaw); }),
            ErrorKind::kInvalidArgument);
}

TEST(Ddtw, EqualsDtwOnDerivatives) {
  std::mt19937_64 gen(12);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_series(gen, 3 + gen() % 30);
    const auto b = random_series(gen, 3 + gen() % 30);
    const auto r = ddtw(a, b);
    EXPECT_EQ(r.cost_space, CostSpace::kDerivative);
    const double ref = testutil::reference_dtw(testutil::reference_derivative(a),
                                               testutil::reference_derivative(b));
    EXPECT_TRUE(near_rel(r.distance, ref, 1e-12));
    EXPECT_TRUE(near_rel(ddtw_distance(a, b), ref, 1e-12));
  }
}

TEST(Ddtw, ScoreIsMeanAbsoluteGapAlongPath) {
  std::mt19937_64 gen(21);
  const auto a = random_series(gen, 17), b = random_series(gen, 23);
  const auto da = testutil::reference_derivative(a);
  const auto db = testutil::reference_derivative(b);
  const auto r = ddtw(a, b);
  double sum = 0.0, raw = 0.0;
  for (const auto& p : r.path.pairs()) {
    sum += std::abs(da[p.i] - db[p.j]);
    raw += std::abs(a[p.i] - b[p.j]);
  }
  EXPECT_NEAR(r.normalized_score, sum / r.path.length(), 1e-12);
  const auto rr = ddtw(a, b, std::nullopt, CostSpace::kRaw);
  EXPECT_EQ(rr.path, r.path);
  EXPECT_NEAR(rr.normalized_score, raw / r.path.length(), 1e-12);
}

TEST(Ddtw, OffsetInvariance) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_series(gen, 3 + gen() % 40, 0.0, 100.0);
    const double c = shift(gen);
    std::vector<double> b(a);
    for (double& v : b) v += c;
    const auto r = ddtw(a, b);
    // Only rounding in a + c separates the two derivative series.
    EXPECT_LE(r.distance, 1e-20);
    EXPECT_LE(r.normalized_score, 1e-12);
    EXPECT_GT(dtw(a, b).distance, 0.0);
  }
  const std::vector<double> a{1, 4, 2, 8};
  const std::vector<double> b{11, 14, 12, 18};
  EXPECT_EQ(ddtw(a, b).distance, 0.0);
  EXPECT_EQ(ddtw(a, b).normalized_score, 0.0);
}

TEST(Oracle, EquivalenceOnSmallInputs) {
  std::mt19937_64 gen(1234);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_series(gen, 3 + gen() % 5);
    const auto b = random_series(gen, 3 + gen() % 5);
    const auto raw = brute_force_align(a, b, CostSpace::kRaw);
    const auto der = brute_force_align(a, b, CostSpace::kDerivative);
    EXPECT_TRUE(near_rel(dtw(a, b).distance, raw.distance, 1e-12));
    EXPECT_TRUE(near_rel(ddtw(a, b).distance, der.distance, 1e-12));
    EXPECT_TRUE(path_is_valid(raw.path, a.size(), b.size()));
  }
}

TEST(Oracle, TrivialCasesAndGuard) {
  const std::vector<double> a{0, 1};
  const auto r = brute_force_align(a, a, CostSpace::kRaw);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.path.pairs(), (std::vector<IndexPair>{{0, 0}, {1, 1}}));
  const std::vector<double> big(9, 1.0);
  EXPECT_EQ(error_kind([&] { brute_force_align(big, big, CostSpace::kRaw); }),
            ErrorKind::kOracleSizeExceeded);
}

TEST(Band, MatchesBandedReference) {
  std::mt19937_64 gen(77);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + gen() % 30, m = 2 + gen() % 30;
    const auto a = random_series(gen, n), b = random_series(gen, m);
    const std::size_t gap = n > m ? n - m : m - n;
    const std::size_t band = std::max<std::size_t>(gap, 1) + gen() % 4;
    const auto r = dtw(a, b, band);
    EXPECT_TRUE(near_rel(r.distance, testutil::reference_banded_dtw(a, b, band), 1e-12));
    EXPECT_TRUE(near_rel(dtw_distance(a, b, band), r.distance, 1e-12));
    EXPECT_TRUE(path_is_valid(r.path, n, m));
    for (const auto& p : r.path.pairs()) {
      const double i = p.i + 1.0, j = p.j + 1.0;
      EXPECT_LE(std::abs(i * m - j * n), static_cast<double>(band) * n);
    }
  }
}

TEST(Band, WideningNeverIncreasesDistance) {
  std::mt19937_64 gen(78);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 5 + gen() % 30, m = 5 + gen() % 30;
    const auto a = random_series(gen, n), b = random_series(gen, m);
    const std::size_t gap = n > m ? n - m : m - n;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t band = std::max<std::size_t>(gap, 1); band <= std::max(n, m);
         ++band) {
      const double d = ddtw(a, b, band).distance;
      EXPECT_LE(d, prev);
      prev = d;
    }
    EXPECT_EQ(ddtw(a, b, std::max(n, m)).distance, ddtw(a, b).distance);
    EXPECT_EQ(dtw(a, b, std::max(n, m) + 3).path, dtw(a, b).path);
  }
}

TEST(Band, Errors) {
  const std::vector<double> a(10, 1.0), b(4, 1.0);
  EXPECT_EQ(error_kind([&] { dtw(a, b, 5); }), ErrorKind::kInfeasibleBand);
  EXPECT_EQ(error_kind([&] { dtw_distance(a, b, 2); }), ErrorKind::kInfeasibleBand);
  EXPECT_EQ(error_kind([&] { dtw(a, b, 0); }), ErrorKind::kInvalidArgument);
  EXPECT_NO_THROW(dtw(a, b, 6));
}

TEST(TieBreak, PrefersDiagonal) {
  const std::vector<double> z(4, 0.0);
  const auto r = dtw(z, z);
  EXPECT_EQ(r.path.length(), 4u);
  const auto s = dtw(std::vector<double>{0, 0, 0}, std::vector<double>{0, 0});
  EXPECT_EQ(s.path.pairs(), (std::vector<IndexPair>{{0, 0}, {1, 0}, {2, 1}}));
}

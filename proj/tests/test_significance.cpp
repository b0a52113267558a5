// tests/test_significance.cpp
//
// Copyright 2026 The lcmeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lcmeval/correlation.hpp"
#include "lcmeval/error.hpp"
#include "lcmeval/significance.hpp"
#include "oracles.hpp"

using namespace lcmeval;

namespace {

const Task kTask{"zh-en", 0.5};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kInvalidArgument;
}

ScoreTable table(const std::string& name, std::size_t systems, std::size_t segments) {
  std::vector<std::string> sys, seg;
  for (std::size_t i = 0; i < systems; ++i) sys.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < segments; ++i) seg.push_back("g" + std::to_string(100 + i));
  return ScoreTable(name, "", kTask, sys, seg);
}

}  // namespace

TEST(ZouCI, IdenticalMetricsGiveZeroWidthAtZero) {
  const auto ci = zou_ci(0.6, 0.6, 1.0, 50);
  EXPECT_EQ(ci.lower, 0.0);
  EXPECT_EQ(ci.upper, 0.0);
}

TEST(ZouCI, AntisymmetricUnderSwap) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int i = 0; i < 200; ++i) {
    const double r12 = u(rng), r13 = u(rng), r23 = u(rng);
    const auto a = zou_ci(r12, r13, r23, 40);
    const auto b = zou_ci(r13, r12, r23, 40);
    EXPECT_NEAR(a.lower, -b.upper, 1e-12);
    EXPECT_NEAR(a.upper, -b.lower, 1e-12);
    EXPECT_LE(a.lower, r12 - r13);
    EXPECT_GE(a.upper, r12 - r13);
  }
}

TEST(ZouCI, NarrowsWithSampleSizeAndWidensWithLevel) {
  double prev = 10.0;
  for (std::size_t n : {10u, 30u, 100u, 1000u}) {
    const auto ci = zou_ci(0.7, 0.5, 0.4, n);
    const double width = ci.upper - ci.lower;
    EXPECT_LT(width, prev);
    prev = width;
  }
  const auto c90 = zou_ci(0.7, 0.5, 0.4, 60, 0.90), c99 = zou_ci(0.7, 0.5, 0.4, 60, 0.99);
  EXPECT_LT(c90.upper - c90.lower, c99.upper - c99.lower);
  EXPECT_DOUBLE_EQ(c99.level, 0.99);
}

TEST(ZouCI, HandComputedExample) {
  // Fisher intervals with z = 1.959963984540054 and n = 103 (sqrt(n - 3) = 10).
  const double z = 1.959963984540054;
  const double l1 = std::tanh(std::atanh(0.5) - z / 10), u1 = std::tanh(std::atanh(0.5) + z / 10);
  const double l2 = std::tanh(std::atanh(0.3) - z / 10), u2 = std::tanh(std::atanh(0.3) + z / 10);
  const double r12 = 0.5, r13 = 0.3, r23 = 0.2;
  const double c = ((r23 - 0.5 * r12 * r13) * (1 - r12 * r12 - r13 * r13 - r23 * r23) + r23 * r23 * r23) /
                   ((1 - r12 * r12) * (1 - r13 * r13));
  const double lower = 0.2 - std::sqrt((r12 - l1) * (r12 - l1) + (u2 - r13) * (u2 - r13) -
                                       2 * c * (r12 - l1) * (u2 - r13));
  const double upper = 0.2 + std::sqrt((u1 - r12) * (u1 - r12) + (r13 - l2) * (r13 - l2) -
                                       2 * c * (u1 - r12) * (r13 - l2));
  const auto ci = zou_ci(r12, r13, r23, 103);
  EXPECT_NEAR(ci.lower, lower, 1e-12);
  EXPECT_NEAR(ci.upper, upper, 1e-12);
}

TEST(ZouCI, ErrorsAndBoundaries) {
  EXPECT_EQ(code_of([] { zou_ci(0.5, 0.5, 0.5, 3); }), ErrorCode::kSampleTooSmall);
  EXPECT_EQ(code_of([] { zou_ci(1.2, 0.5, 0.5, 30); }), ErrorCode::kDegenerateCorrelation);
  EXPECT_EQ(code_of([] { zou_ci(NAN, 0.5, 0.5, 30); }), ErrorCode::kDegenerateCorrelation);
  const auto edge = zou_ci(1.0, 0.5, 0.5, 30);
  EXPECT_TRUE(std::isfinite(edge.lower));
  EXPECT_LE(edge.lower, 0.5);
  EXPECT_GE(edge.upper, 0.5);
}

TEST(ZouCI, MonteCarloCoverage) {
  std::mt19937_64 rng(31337);
  const double r12 = 0.6, r13 = 0.4, r23 = 0.5;
  const int reps = 1000;
  int covered = 0;
  std::vector<double> x1, x2, x3;
  for (int i = 0; i < reps; ++i) {
    oracle::trivariate_normal(rng, r12, r13, r23, 100, x1, x2, x3);
    const auto ci = zou_ci(pearson(x1, x2).value, pearson(x1, x3).value, pearson(x2, x3).value, 100);
    covered += ci.lower <= r12 - r13 && r12 - r13 <= ci.upper;
  }
  const double coverage = static_cast<double>(covered) / reps;
  EXPECT_GT(coverage, 0.92);
  EXPECT_LT(coverage, 0.98);
}

TEST(SystemSigMatrix, LayoutAndWins) {
  std::vector<double> human{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::vector<double>> metrics{human, {2, 1, 4, 3, 6, 5, 8, 7, 10, 9}, {5, 3, 8, 1, 9, 2, 7, 4, 6, 10}};
  const auto m = system_sig_matrix(kTask, {"exact", "close", "noise"}, metrics, human);
  EXPECT_EQ(m.cells.size(), 6u);
  EXPECT_EQ(m.cell(0, 2).row, 0u);
  EXPECT_EQ(m.cell(0, 2).col, 2u);
  EXPECT_EQ(m.cell(2, 1).col, 1u);
  EXPECT_TRUE(m.cell(0, 2).significant);
  EXPECT_FALSE(m.cell(2, 0).significant);
  EXPECT_TRUE(m.cell(1, 2).significant);
  EXPECT_THROW(m.cell(1, 1), Error);
  for (const auto& c : m.cells) {
    ASSERT_TRUE(c.ci.has_value());
    EXPECT_FALSE(c.p_value.has_value());
    EXPECT_EQ(c.significant, c.ci->lower > 0.0);
  }
}

TEST(PermBoth, IdenticalTablesGivePOne) {
  auto a = table("A", 3, 20), h = table("human", 3, 20);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  for (auto& v : a.values) v = z(rng);
  for (auto& v : h.values) v = z(rng);
  const auto counts = perm_both_counts(a, a, h, 200, 1);
  EXPECT_EQ(counts.delta, 0.0);
  EXPECT_EQ(counts.p_a_over_b(), 1.0);
  EXPECT_EQ(counts.p_b_over_a(), 1.0);
  EXPECT_EQ(perm_both(a, a, h, 200, 1), 1.0);
}

TEST(PermBoth, DetectsAClearlyBetterMetric) {
  auto good = table("good", 3, 60), bad = table("bad", 3, 60), h = table("human", 3, 60);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    h.values[i] = z(rng);
    good.values[i] = h.values[i] + 0.2 * z(rng);
    bad.values[i] = z(rng);
  }
  const auto c = perm_both_counts(good, bad, h, 500, 3);
  EXPECT_GT(c.delta, 0.3);
  EXPECT_LT(c.p_a_over_b(), 0.01);
  EXPECT_GT(c.p_b_over_a(), 0.99);
  EXPECT_EQ(perm_both_counts(good, bad, h, 500, 3, 4).at_least, c.at_least);
}

TEST(PermBoth, Errors) {
  auto a = table("A", 2, 5), h = table("human", 2, 5), shorter = table("B", 2, 4);
  for (auto* t : {&a, &h, &shorter})
    for (std::size_t i = 0; i < t->values.size(); ++i) t->values[i] = static_cast<double>(i % 3);
  EXPECT_EQ(code_of([&] { perm_both(a, shorter, h, 10, 1); }), ErrorCode::kCellMismatch);
  ScoreTable sys_only("S", "", kTask, a.systems, {}, TableLevel::kSystemOnly);
  EXPECT_EQ(code_of([&] { perm_both(a, sys_only, h, 10, 1); }), ErrorCode::kSystemOnlyTable);
  auto holes = a;
  holes.values[2] = NAN;
  EXPECT_EQ(code_of([&] { perm_both(a, holes, h, 10, 1); }), ErrorCode::kIncompleteTable);
}

TEST(Bonferroni, DividesAlphaByCount) {
  const std::vector<double> p{0.001, 0.01, 0.02, 0.2};
  EXPECT_EQ(bonferroni(p, 0.05), (std::vector<bool>{true, true, false, false}));
  const std::vector<double> edge{0.0125, 0.0124};
  EXPECT_EQ(bonferroni(std::vector<double>{0.0125, 0.0124, 0.5, 0.5}, 0.05),
            (std::vector<bool>{false, true, false, false}));
  EXPECT_EQ(bonferroni(std::vector<double>{0.049}, 0.05), std::vector<bool>{true});
  EXPECT_THROW(bonferroni(std::vector<double>{1.5}, 0.05), Error);
}

TEST(SegmentSigMatrix, SymmetricPairsShareOneRun) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  auto h = table("human", 3, 30);
  for (auto& v : h.values) v = z(rng);
  std::vector<ScoreTable> tables;
  for (double noise : {0.1, 1.0, 3.0}) {
    auto t = table("m" + std::to_string(tables.size()), 3, 30);
    for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = h.values[i] + noise * z(rng);
    tables.push_back(t);
  }
  const auto m = segment_sig_matrix(tables, h, 300, 17, 0.05, 2);
  EXPECT_EQ(m.level, Level::kSegment);
  EXPECT_DOUBLE_EQ(m.confidence, 0.95);
  EXPECT_TRUE(m.cell(0, 2).significant);
  EXPECT_FALSE(m.cell(2, 0).significant);
  const auto c = perm_both_counts(tables[0], tables[2], h, 300, pair_seed(17, "m0", "m2"));
  EXPECT_EQ(*m.cell(0, 2).p_value, c.p_a_over_b());
  EXPECT_EQ(*m.cell(2, 0).p_value, c.p_b_over_a());
  EXPECT_EQ(pair_seed(17, "m0", "m2"), pair_seed(17, "m2", "m0"));

  // Reordering the inputs permutes the matrix but leaves every p-value alone.
  std::vector<ScoreTable> reversed(tables.rbegin(), tables.rend());
  const auto r = segment_sig_matrix(reversed, h, 300, 17, 0.05, 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) EXPECT_EQ(*m.cell(i, j).p_value, *r.cell(2 - i, 2 - j).p_value);
  for (const auto& cell : m.cells) {
    ASSERT_TRUE(cell.bonferroni_significant.has_value());
    EXPECT_EQ(*cell.bonferroni_significant, *cell.p_value < 0.05 / 6);
  }
}

TEST(PairedBootstrap, ReferenceBehaviour) {
  std::vector<double> a(200), b(200), c(200);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> z;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = z(rng);
    c[i] = a[i] + 1.0;
  }
  b = a;
  const double same = paired_bootstrap(a, b, 1000, 1);
  EXPECT_EQ(same, 0.5);
  EXPECT_EQ(paired_bootstrap(c, a, 1000, 1), 0.0);
  EXPECT_EQ(paired_bootstrap(a, c, 1000, 1), 1.0);
  std::vector<double> noisy(200);
  for (auto& v : noisy) v = z(rng);
  EXPECT_EQ(paired_bootstrap(a, noisy, 500, 9, 1), paired_bootstrap(a, noisy, 500, 9, 8));
  const double p = paired_bootstrap(a, noisy, 2000, 9);
  const double q = paired_bootstrap(noisy, a, 2000, 9);
  EXPECT_NEAR(p + q, 1.0, 1e-12);
}

TEST(PairedBootstrap, Errors) {
  std::vector<double> a{1, 2, 3}, b{1, 2};
  EXPECT_EQ(code_of([&] { paired_bootstrap(a, b, 10, 1); }), ErrorCode::kAlignmentMismatch);
  std::vector<double> one{1};
  EXPECT_EQ(code_of([&] { paired_bootstrap(one, one, 10, 1); }), ErrorCode::kSampleTooSmall);
  EXPECT_EQ(code_of([&] { paired_bootstrap(a, a, 0, 1); }), ErrorCode::kInvalidArgument);
}

TEST(Dagger, Thresholds) {
  EXPECT_EQ(dagger(0.0), "††");
  EXPECT_EQ(dagger(0.0099), "††");
  EXPECT_EQ(dagger(0.01), "†");
  EXPECT_EQ(dagger(0.0499), "†");
  EXPECT_EQ(dagger(0.05), "");
  EXPECT_EQ(dagger(0.7), "");
}

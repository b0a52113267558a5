// include/lcmeval/significance.hpp
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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcmeval/score_table.hpp"
#include "lcmeval/types.hpp"

namespace lcmeval {

struct CIResult {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

/// Confidence interval for r12 - r13, two correlations that share variable 1
/// (the human scores), with r23 the correlation between the two metrics.
/// Fisher-z intervals of r12 and r13 are combined through the estimated
/// correlation between the two correlation estimates (Zou's method for
/// overlapping correlations).
///
/// |r| = 1 inputs are handled as limits: a correlation of exactly +-1 has a
/// zero-width marginal interval, and r23 = 1 (linearly identical metrics)
/// gives the degenerate interval [r12 - r13, r12 - r13].
/// Throws SampleTooSmall (n < 4) and DegenerateCorrelation (|r| > 1 or NaN).
CIResult zou_ci(double r12, double r13, double r23, std::size_t n, double level = 0.95);

struct SigCell {
  std::size_t row = 0;
  std::size_t col = 0;
  std::optional<CIResult> ci;      // system level
  std::optional<double> p_value;   // segment level
  bool significant = false;
  std::optional<bool> bonferroni_significant;
};

struct SigMatrix {
  Task task;
  Level level = Level::kSystem;
  double confidence = 0.95;  // CI level, or 1 - alpha for permutation tests
  std::vector<std::string> metrics;
  std::vector<SigCell> cells;  // row-major over ordered pairs, diagonal absent

  const SigCell& cell(std::size_t row, std::size_t col) const;
};

/// Row beats column when the CI of r(human,row) - r(human,col) has lower
/// bound strictly above zero.
SigMatrix system_sig_matrix(const Task& task, const std::vector<std::string>& names,
                            std::span<const std::vector<double>> metric_vectors, std::span<const double> human,
                            double level = 0.95);

/// Counts from one PERM-BOTH run, usable for both directions of a pair.
struct PermutationCounts {
  double delta = 0.0;             // tau(A, human) - tau(B, human)
  std::size_t at_least = 0;       // replicates with delta* >= delta
  std::size_t at_most = 0;        // replicates with delta* <= delta
  std::size_t replicates = 0;

  double p_a_over_b() const { return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(replicates) + 1.0); }
  double p_b_over_a() const { return (1.0 + static_cast<double>(at_most)) / (static_cast<double>(replicates) + 1.0); }
};

/// Each replicate swaps the A and B scores of every cell independently with
/// probability 1/2 (replicate r draws from derive_seed(seed, "perm", r)).
PermutationCounts perm_both_counts(const ScoreTable& a, const ScoreTable& b, const ScoreTable& human,
                                   std::size_t replicates, std::uint64_t seed, unsigned threads = 1);

/// One-sided p-value for "A correlates better with human than B".
double perm_both(const ScoreTable& a, const ScoreTable& b, const ScoreTable& human, std::size_t replicates,
                 std::uint64_t seed, unsigned threads = 1);

/// flag_i = p_i < alpha / m with m = pvals.size().
std::vector<bool> bonferroni(std::span<const double> pvals, double alpha = 0.05);

/// Seed of the permutation run for an unordered metric pair.
std::uint64_t pair_seed(std::uint64_t seed, const std::string& a, const std::string& b);

SigMatrix segment_sig_matrix(std::span<const ScoreTable> tables, const ScoreTable& human, std::size_t replicates,
                             std::uint64_t seed, double alpha = 0.05, unsigned threads = 1);

/// Fraction of segment resamples in which A does not beat B (ties count one
/// half), i.e. a one-sided p-value for "A is better".
double paired_bootstrap(std::span<const double> seg_a, std::span<const double> seg_b, std::size_t iterations,
                        std::uint64_t seed, unsigned threads = 1);

/// "††" for p < 0.01, "†" for p < 0.05, empty otherwise.
std::string dagger(double p);

}  // namespace lcmeval

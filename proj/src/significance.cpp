// src/significance.cpp
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

#include "lcmeval/significance.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "lcmeval/correlation.hpp"
#include "lcmeval/error.hpp"
#include "lcmeval/parallel.hpp"
#include "lcmeval/rng.hpp"

namespace lcmeval {

namespace {

constexpr double kUnitSnap = 1e-12;

double checked_correlation(double r, const char* name) {
  if (!std::isfinite(r) || std::fabs(r) > 1.0 + kUnitSnap)
    throw Error(ErrorCode::kDegenerateCorrelation, std::string(name) + " is not a correlation");
  if (1.0 - std::fabs(r) < kUnitSnap) return r > 0 ? 1.0 : -1.0;
  return r;
}

struct Interval {
  double lower, upper;
};

Interval fisher_interval(double r, double z_crit, std::size_t n) {
  if (std::fabs(r) == 1.0) return {r, r};
  const double z = std::atanh(r);
  const double half = z_crit / std::sqrt(static_cast<double>(n) - 3.0);
  return {std::tanh(z - half), std::tanh(z + half)};
}

}  // namespace

CIResult zou_ci(double r12, double r13, double r23, std::size_t n, double level) {
  if (n < 4) throw Error(ErrorCode::kSampleTooSmall, "Zou interval needs n >= 4");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::kInvalidArgument, "confidence level outside (0, 1)");
  r12 = checked_correlation(r12, "r12");
  r13 = checked_correlation(r13, "r13");
  r23 = checked_correlation(r23, "r23");

  const double diff = r12 - r13;
  if (r23 == 1.0) return {diff, diff, level};

  const double z_crit = boost::math::quantile(boost::math::normal_distribution<double>(), (1.0 + level) / 2.0);
  const auto [l1, u1] = fisher_interval(r12, z_crit, n);
  const auto [l2, u2] = fisher_interval(r13, z_crit, n);

  // With |r12| or |r13| = 1 the terms multiplying c vanish.
  double c = 0.0;
  if (std::fabs(r12) < 1.0 && std::fabs(r13) < 1.0) {
    c = ((r23 - 0.5 * r12 * r13) * (1.0 - r12 * r12 - r13 * r13 - r23 * r23) + r23 * r23 * r23) /
        ((1.0 - r12 * r12) * (1.0 - r13 * r13));
  }
  const double lo_a = r12 - l1, lo_b = u2 - r13;
  const double hi_a = u1 - r12, hi_b = r13 - l2;
  const double lower = diff - std::sqrt(std::max(0.0, lo_a * lo_a + lo_b * lo_b - 2.0 * c * lo_a * lo_b));
  const double upper = diff + std::sqrt(std::max(0.0, hi_a * hi_a + hi_b * hi_b - 2.0 * c * hi_a * hi_b));
  return {lower, upper, level};
}

const SigCell& SigMatrix::cell(std::size_t row, std::size_t col) const {
  if (row == col || row >= metrics.size() || col >= metrics.size())
    throw Error(ErrorCode::kInvalidArgument, "no significance cell on the diagonal or out of range");
  const std::size_t k = metrics.size();
  return cells[row * (k - 1) + (col < row ? col : col - 1)];
}

SigMatrix system_sig_matrix(const Task& task, const std::vector<std::string>& names,
                            std::span<const std::vector<double>> metric_vectors, std::span<const double> human,
                            double level) {
  if (names.size() != metric_vectors.size())
    throw Error(ErrorCode::kLengthMismatch, "metric names and vectors differ in count");
  const std::size_t k = names.size();
  std::vector<double> with_human(k);
  std::vector<double> between(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) with_human[i] = pearson(human, metric_vectors[i]).value;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      between[i * k + j] = between[j * k + i] = pearson(metric_vectors[i], metric_vectors[j]).value;

  SigMatrix m;
  m.task = task;
  m.level = Level::kSystem;
  m.confidence = level;
  m.metrics = names;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      SigCell cell;
      cell.row = i;
      cell.col = j;
      cell.ci = zou_ci(with_human[i], with_human[j], between[i * k + j], human.size(), level);
      cell.significant = cell.ci->lower > 0.0;
      m.cells.push_back(cell);
    }
  }
  return m;
}

PermutationCounts perm_both_counts(const ScoreTable& a, const ScoreTable& b, const ScoreTable& human,
                                   std::size_t replicates, std::uint64_t seed, unsigned threads) {
  if (a.level != TableLevel::kSegment || b.level != TableLevel::kSegment)
    throw Error(ErrorCode::kSystemOnlyTable, "permutation test needs segment-level tables");
  if (a.task != b.task || a.systems != b.systems || a.segments != b.segments || a.task != human.task ||
      a.systems != human.systems || a.segments != human.segments)
    throw Error(ErrorCode::kCellMismatch, "tables " + a.name() + " and " + b.name() + " cover different cells");
  a.require_dense();
  b.require_dense();
  human.require_dense();

  PermutationCounts out;
  out.replicates = replicates;
  out.delta = kendall_tau_b(a.values, human.values).value - kendall_tau_b(b.values, human.values).value;

  std::vector<signed char> verdict(replicates, 0);  // bit 0: >=, bit 1: <=
  parallel_for(replicates, threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, "perm", r));
    std::vector<double> pa(a.values), pb(b.values);
    for (std::size_t i = 0; i < pa.size(); ++i)
      if (rng.coin()) std::swap(pa[i], pb[i]);
    const double d = kendall_tau_b(pa, human.values).value - kendall_tau_b(pb, human.values).value;
    verdict[r] = static_cast<signed char>((d >= out.delta ? 1 : 0) | (d <= out.delta ? 2 : 0));
  });
  for (auto v : verdict) {
    out.at_least += (v & 1) ? 1 : 0;
    out.at_most += (v & 2) ? 1 : 0;
  }
  return out;
}

double perm_both(const ScoreTable& a, const ScoreTable& b, const ScoreTable& human, std::size_t replicates,
                 std::uint64_t seed, unsigned threads) {
  return perm_both_counts(a, b, human, replicates, seed, threads).p_a_over_b();
}

std::vector<bool> bonferroni(std::span<const double> pvals, double alpha) {
  std::vector<bool> flags;
  flags.reserve(pvals.size());
  const double threshold = alpha / static_cast<double>(std::max<std::size_t>(pvals.size(), 1));
  for (double p : pvals) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p-value outside [0, 1]");
    flags.push_back(p < threshold);
  }
  return flags;
}

std::uint64_t pair_seed(std::uint64_t seed, const std::string& a, const std::string& b) {
  const bool ordered = a <= b;
  return derive_seed(seed, "perm-pair:" + (ordered ? a : b) + "\x1f" + (ordered ? b : a), 0);
}

SigMatrix segment_sig_matrix(std::span<const ScoreTable> tables, const ScoreTable& human, std::size_t replicates,
                             std::uint64_t seed, double alpha, unsigned threads) {
  const std::size_t k = tables.size();
  SigMatrix m;
  m.task = human.task;
  m.level = Level::kSegment;
  m.confidence = 1.0 - alpha;
  for (const auto& t : tables) m.metrics.push_back(t.name());

  // p[i][j]: row i over column j. One run per unordered pair serves both.
  std::vector<double> p(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const bool i_first = m.metrics[i] <= m.metrics[j];
      const ScoreTable& first = i_first ? tables[i] : tables[j];
      const ScoreTable& second = i_first ? tables[j] : tables[i];
      const auto counts = perm_both_counts(first, second, human, replicates,
                                           pair_seed(seed, m.metrics[i], m.metrics[j]), threads);
      p[i * k + j] = i_first ? counts.p_a_over_b() : counts.p_b_over_a();
      p[j * k + i] = i_first ? counts.p_b_over_a() : counts.p_a_over_b();
    }
  }
  std::vector<double> pvals;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) pvals.push_back(p[i * k + j]);
  const auto corrected = bonferroni(pvals, alpha);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      SigCell cell;
      cell.row = i;
      cell.col = j;
      cell.p_value = p[i * k + j];
      cell.significant = *cell.p_value < alpha;
      cell.bonferroni_significant = corrected[idx++];
      m.cells.push_back(cell);
    }
  }
  return m;
}

double paired_bootstrap(std::span<const double> seg_a, std::span<const double> seg_b, std::size_t iterations,
                        std::uint64_t seed, unsigned threads) {
  if (seg_a.size() != seg_b.size())
    throw Error(ErrorCode::kAlignmentMismatch, "systems scored on different segment counts");
  if (seg_a.size() < 2) throw Error(ErrorCode::kSampleTooSmall, "paired bootstrap needs at least 2 segments");
  if (iterations == 0) throw Error(ErrorCode::kInvalidArgument, "paired bootstrap needs at least 1 iteration");
  const std::size_t n = seg_a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = seg_a[i] - seg_b[i];

  // 0: A ahead, 1: tie, 2: B ahead
  std::vector<signed char> outcome(iterations, 0);
  parallel_for(iterations, threads, [&](std::size_t it) {
    Rng rng(derive_seed(seed, "bootstrap", it));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += diff[rng.below(n)];
    outcome[it] = static_cast<signed char>(sum > 0.0 ? 0 : (sum == 0.0 ? 1 : 2));
  });
  double not_better = 0.0;
  for (auto o : outcome) not_better += o == 2 ? 1.0 : (o == 1 ? 0.5 : 0.0);
  return not_better / static_cast<double>(iterations);
}

std::string dagger(double p) {
  if (p < 0.01) return "††";
  if (p < 0.05) return "†";
  return "";
}

}  // namespace lcmeval

// include/lcmeval/meta_eval.hpp
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

// Metric-human correlation at system and segment level.
//
// System level works on vectors of per-system scores extended with hybrid
// pseudo-systems: each hybrid picks, for every segment independently, the
// output of one real system, so K hybrids turn a handful of real systems
// into |systems| + K correlation points. Segment-level metrics score a hybrid
// by averaging the picked segment scores; corpus-level metrics (BLEU, BLEU*)
// are recomputed from the summed sufficient statistics of the picked
// segments.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcmeval/correlation.hpp"
#include "lcmeval/lexical.hpp"
#include "lcmeval/score_table.hpp"

namespace lcmeval {

struct SystemScoreVector {
  Task task;
  std::vector<std::string> ids;
  std::vector<double> scores;
};

/// Per-system mean of segment scores; system-only tables pass through.
/// Throws IncompleteTable.
SystemScoreVector system_scores(const ScoreTable& table);

struct HybridSelector {
  std::string hybrid_id;
  std::uint64_t master_seed = 0;
  std::size_t index = 0;
  std::vector<std::size_t> choice;  // segment position -> system position

  bool operator==(const HybridSelector&) const = default;
};

/// Hybrid i draws from derive_seed(seed, "hybrid", i), so the result is the
/// same for any thread count.
std::vector<HybridSelector> draw_hybrid_selectors(std::size_t n_systems, std::size_t n_segments, std::size_t count,
                                                  std::uint64_t seed, unsigned threads = 1);

enum class CorpusMetric { kBleu, kBleuStar };

/// Corpus-level metric held as per-cell BLEU statistics.
struct CorpusStatTable {
  std::string metric_id;
  Task task;
  CorpusMetric metric = CorpusMetric::kBleu;
  std::vector<std::string> systems;
  std::vector<std::string> segments;
  std::vector<BleuStats> stats;  // systems x segments

  const BleuStats& at(std::size_t system, std::size_t segment) const { return stats[system * segments.size() + segment]; }
  double finalize(const BleuStats& total) const;
};

/// One score per real system.
ScoreTable system_only_table(const CorpusStatTable& table);

/// Real systems first (in table order), then one entry per selector.
SystemScoreVector extend_with_hybrids(const ScoreTable& table, std::span<const HybridSelector> selectors,
                                      unsigned threads = 1);
SystemScoreVector extend_with_hybrids(const CorpusStatTable& table, std::span<const HybridSelector> selectors,
                                      unsigned threads = 1);

struct HybridSupersample {
  std::vector<HybridSelector> selectors;
  SystemScoreVector human;
  std::vector<SystemScoreVector> metrics;  // segment-level tables, then corpus tables
  std::vector<std::string> warnings;
};

/// Throws TooFewSystems with fewer than 2 real systems.
HybridSupersample hybrid_supersample(std::span<const ScoreTable> tables, std::span<const CorpusStatTable> corpus_tables,
                                     const ScoreTable& human, std::size_t count, std::uint64_t seed,
                                     unsigned threads = 1);

/// Kendall tau-b over all (system, segment) cells pooled into one vector.
/// Throws SystemOnlyTable, CellMismatch.
CorrelationResult segment_correlation(const ScoreTable& table, const ScoreTable& human);

/// Human scores and hybrid selectors of one task, shared by every metric.
struct TaskContext {
  Task task;
  ScoreTable human;
  std::vector<HybridSelector> selectors;
  SystemScoreVector human_system;
};

TaskContext make_task_context(ScoreTable human, std::size_t hybrids, std::uint64_t seed, unsigned threads = 1);

/// Pearson over the hybrid-extended system vectors.
double system_level_correlation(const ScoreTable& table, const TaskContext& ctx, unsigned threads = 1);
double system_level_correlation(const CorpusStatTable& table, const TaskContext& ctx, unsigned threads = 1);
double segment_level_correlation(const ScoreTable& table, const TaskContext& ctx);

struct VariantCorrelations {
  std::string variant_id;
  std::vector<double> per_task;
  double average = 0.0;
};

struct VariantSelection {
  std::string metric_id;
  std::string chosen_variant;
  Level level = Level::kSystem;
  std::vector<Task> tasks;
  std::vector<double> per_task;
  double average = 0.0;
  std::vector<VariantCorrelations> candidates;  // sorted by variant id
};

/// Picks the variant with the highest unweighted mean correlation over the
/// contexts' tasks; ties go to the lexicographically smallest variant id.
/// `tables` holds every variant of one metric for every task.
VariantSelection select_best_variant(std::span<const ScoreTable> tables, std::span<const TaskContext> contexts,
                                     Level level, unsigned threads = 1);

}  // namespace lcmeval

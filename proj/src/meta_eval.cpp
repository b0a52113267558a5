// src/meta_eval.cpp
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

#include "lcmeval/meta_eval.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lcmeval/error.hpp"
#include "lcmeval/parallel.hpp"
#include "lcmeval/rng.hpp"

namespace lcmeval {

namespace {

void require_same_cells(const ScoreTable& a, const ScoreTable& b) {
  if (a.task != b.task || a.systems != b.systems || a.segments != b.segments)
    throw Error(ErrorCode::kCellMismatch, "tables " + a.name() + " and " + b.name() + " cover different cells");
}

void require_selectors_fit(std::span<const HybridSelector> selectors, std::size_t n_systems, std::size_t n_segments) {
  for (const auto& sel : selectors) {
    if (sel.choice.size() != n_segments)
      throw Error(ErrorCode::kCellMismatch, "hybrid " + sel.hybrid_id + " covers a different segment set");
    for (auto c : sel.choice)
      if (c >= n_systems) throw Error(ErrorCode::kCellMismatch, "hybrid " + sel.hybrid_id + " selects an unknown system");
  }
}

}  // namespace

SystemScoreVector system_scores(const ScoreTable& table) {
  table.require_dense();
  SystemScoreVector out;
  out.task = table.task;
  out.ids = table.systems;
  out.scores.resize(table.systems.size());
  for (std::size_t s = 0; s < table.systems.size(); ++s) {
    if (table.level == TableLevel::kSystemOnly) {
      out.scores[s] = table.at(s, 0);
      continue;
    }
    double sum = 0.0;
    for (std::size_t g = 0; g < table.segments.size(); ++g) sum += table.at(s, g);
    out.scores[s] = sum / static_cast<double>(table.segments.size());
  }
  return out;
}

std::vector<HybridSelector> draw_hybrid_selectors(std::size_t n_systems, std::size_t n_segments, std::size_t count,
                                                  std::uint64_t seed, unsigned threads) {
  if (n_systems < 1) throw Error(ErrorCode::kTooFewSystems, "no systems to sample from");
  std::vector<HybridSelector> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "hybrid", i));
    HybridSelector& sel = out[i];
    sel.hybrid_id = "hybrid-" + std::to_string(i + 1);
    sel.master_seed = seed;
    sel.index = i;
    sel.choice.resize(n_segments);
    for (auto& c : sel.choice) c = static_cast<std::size_t>(rng.below(n_systems));
  });
  return out;
}

double CorpusStatTable::finalize(const BleuStats& total) const {
  const BleuScore score = finalize_bleu(total);
  return metric == CorpusMetric::kBleu ? score.bleu : score.bleu_star;
}

ScoreTable system_only_table(const CorpusStatTable& table) {
  ScoreTable out(table.metric_id, "", table.task, table.systems, {}, TableLevel::kSystemOnly);
  for (std::size_t s = 0; s < table.systems.size(); ++s) {
    BleuStats total(static_cast<int>(table.stats.empty() ? 4 : table.stats.front().matches.size()));
    for (std::size_t g = 0; g < table.segments.size(); ++g) total += table.at(s, g);
    out.at(s, 0) = table.finalize(total);
  }
  return out;
}

SystemScoreVector extend_with_hybrids(const ScoreTable& table, std::span<const HybridSelector> selectors,
                                      unsigned threads) {
  SystemScoreVector out = system_scores(table);
  if (selectors.empty()) return out;
  if (table.level != TableLevel::kSegment)
    throw Error(ErrorCode::kSystemOnlyTable, "table " + table.name() + " cannot be resampled per segment");
  require_selectors_fit(selectors, table.systems.size(), table.segments.size());
  const std::size_t base = out.ids.size();
  out.ids.resize(base + selectors.size());
  out.scores.resize(base + selectors.size());
  parallel_for(selectors.size(), threads, [&](std::size_t h) {
    double sum = 0.0;
    for (std::size_t g = 0; g < table.segments.size(); ++g) sum += table.at(selectors[h].choice[g], g);
    out.ids[base + h] = selectors[h].hybrid_id;
    out.scores[base + h] = sum / static_cast<double>(table.segments.size());
  });
  return out;
}

SystemScoreVector extend_with_hybrids(const CorpusStatTable& table, std::span<const HybridSelector> selectors,
                                      unsigned threads) {
  require_selectors_fit(selectors, table.systems.size(), table.segments.size());
  const ScoreTable real = system_only_table(table);
  SystemScoreVector out = system_scores(real);
  const std::size_t base = out.ids.size();
  out.ids.resize(base + selectors.size());
  out.scores.resize(base + selectors.size());
  const int orders = static_cast<int>(table.stats.empty() ? 4 : table.stats.front().matches.size());
  parallel_for(selectors.size(), threads, [&](std::size_t h) {
    BleuStats total(orders);
    for (std::size_t g = 0; g < table.segments.size(); ++g) total += table.at(selectors[h].choice[g], g);
    out.ids[base + h] = selectors[h].hybrid_id;
    out.scores[base + h] = table.finalize(total);
  });
  return out;
}

HybridSupersample hybrid_supersample(std::span<const ScoreTable> tables, std::span<const CorpusStatTable> corpus_tables,
                                     const ScoreTable& human, std::size_t count, std::uint64_t seed,
                                     unsigned threads) {
  if (human.systems.size() < 2)
    throw Error(ErrorCode::kTooFewSystems, "hybrid super sampling needs at least 2 real systems");
  for (const auto& t : tables) require_same_cells(t, human);
  for (const auto& t : corpus_tables)
    if (t.task != human.task || t.systems != human.systems || t.segments != human.segments)
      throw Error(ErrorCode::kCellMismatch, "corpus table " + t.metric_id + " covers different cells than human");

  HybridSupersample out;
  if (count == 0 && human.systems.size() < 3)
    out.warnings.push_back(task_label(human.task) + ": system-level correlation over " +
                           std::to_string(human.systems.size()) + " points without hybrids is degenerate");
  out.selectors = draw_hybrid_selectors(human.systems.size(), human.segments.size(), count, seed, threads);
  out.human = extend_with_hybrids(human, out.selectors, threads);
  for (const auto& t : tables) out.metrics.push_back(extend_with_hybrids(t, out.selectors, threads));
  for (const auto& t : corpus_tables) out.metrics.push_back(extend_with_hybrids(t, out.selectors, threads));
  return out;
}

CorrelationResult segment_correlation(const ScoreTable& table, const ScoreTable& human) {
  if (table.level != TableLevel::kSegment)
    throw Error(ErrorCode::kSystemOnlyTable, "metric " + table.name() + " has no segment-level scores");
  require_same_cells(table, human);
  table.require_dense();
  human.require_dense();
  return kendall_tau_b(table.values, human.values);
}

TaskContext make_task_context(ScoreTable human, std::size_t hybrids, std::uint64_t seed, unsigned threads) {
  TaskContext ctx;
  ctx.task = human.task;
  ctx.selectors = draw_hybrid_selectors(human.systems.size(), human.segments.size(), hybrids, seed, threads);
  ctx.human_system = extend_with_hybrids(human, ctx.selectors, threads);
  ctx.human = std::move(human);
  return ctx;
}

double system_level_correlation(const ScoreTable& table, const TaskContext& ctx, unsigned threads) {
  require_same_cells(table, ctx.human);
  const auto metric = extend_with_hybrids(table, ctx.selectors, threads);
  return pearson(metric.scores, ctx.human_system.scores).value;
}

double system_level_correlation(const CorpusStatTable& table, const TaskContext& ctx, unsigned threads) {
  const auto metric = extend_with_hybrids(table, ctx.selectors, threads);
  return pearson(metric.scores, ctx.human_system.scores).value;
}

double segment_level_correlation(const ScoreTable& table, const TaskContext& ctx) {
  return segment_correlation(table, ctx.human).value;
}

VariantSelection select_best_variant(std::span<const ScoreTable> tables, std::span<const TaskContext> contexts,
                                     Level level, unsigned threads) {
  if (tables.empty()) throw Error(ErrorCode::kNoVariants, "no variant tables supplied");
  if (contexts.empty()) throw Error(ErrorCode::kInvalidArgument, "no tasks to select over");
  std::set<std::string> metrics;
  std::map<std::string, std::map<Task, const ScoreTable*>> by_variant;
  for (const auto& t : tables) {
    metrics.insert(t.metric_id);
    by_variant[t.variant_id][t.task] = &t;
  }
  if (metrics.size() != 1) throw Error(ErrorCode::kInvalidArgument, "variant tables of more than one metric");

  VariantSelection sel;
  sel.metric_id = *metrics.begin();
  sel.level = level;
  for (const auto& ctx : contexts) sel.tasks.push_back(ctx.task);

  bool have_best = false;
  for (const auto& [variant, per_task] : by_variant) {
    VariantCorrelations vc;
    vc.variant_id = variant;
    for (const auto& ctx : contexts) {
      auto it = per_task.find(ctx.task);
      if (it == per_task.end())
        throw Error(ErrorCode::kIncompleteTable,
                    sel.metric_id + "/" + variant + " has no scores for " + task_label(ctx.task));
      vc.per_task.push_back(level == Level::kSystem ? system_level_correlation(*it->second, ctx, threads)
                                                    : segment_level_correlation(*it->second, ctx));
    }
    double sum = 0.0;
    for (double r : vc.per_task) sum += r;
    vc.average = sum / static_cast<double>(vc.per_task.size());
    // Map iteration is sorted, so strict > keeps the smallest id on ties.
    if (!have_best || vc.average > sel.average) {
      have_best = true;
      sel.chosen_variant = vc.variant_id;
      sel.per_task = vc.per_task;
      sel.average = vc.average;
    }
    sel.candidates.push_back(std::move(vc));
  }
  return sel;
}

}  // namespace lcmeval

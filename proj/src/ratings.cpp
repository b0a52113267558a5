// src/ratings.cpp
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

#include "lcmeval/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "json.hpp"
#include "lcmeval/correlation.hpp"
#include "lcmeval/error.hpp"
#include "lcmeval/lexical.hpp"
#include "lcmeval/rng.hpp"

namespace lcmeval {

std::vector<TrapPair> generate_traps(std::span<const SegmentRecord* const> segments, double ratio, int count,
                                     std::uint64_t seed, LengthUnit unit) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "trap ratio must lie in (0, 1), got " + format_shortest(ratio));
  if (count < 0) throw Error(ErrorCode::kInvalidArgument, "negative trap count");
  if (static_cast<std::size_t>(count) > segments.size())
    throw Error(ErrorCode::kNotEnoughSegments, "asked for " + std::to_string(count) + " traps from " +
                                                   std::to_string(segments.size()) + " segments");
  std::vector<std::size_t> pool(segments.size());
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }

  std::vector<TrapPair> traps;
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    const SegmentRecord& seg = *segments[pool[i]];
    const std::string normalized = nfc(seg.reference_text);
    const auto spans = token_spans(normalized, scheme_for_unit(unit, scheme_for_direction(seg.direction)));
    const auto keep = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(spans.size()) + 1e-9));
    TrapPair trap;
    trap.direction = seg.direction;
    trap.seg_id = seg.seg_id;
    trap.truncated_text = keep == 0 ? std::string() : normalized.substr(0, spans[keep - 1].end);
    trap.original_reference = seg.reference_text;
    trap.ratio = ratio;
    traps.push_back(std::move(trap));
  }
  std::sort(traps.begin(), traps.end(), [](const TrapPair& a, const TrapPair& b) { return a.seg_id < b.seg_id; });
  return traps;
}

long long trap_annotation_count(const CampaignConfig& config) {
  return static_cast<long long>(config.traps_per_annotator) * config.annotators_per_task *
         static_cast<long long>(config.length_ratios.size()) * static_cast<long long>(config.directions.size());
}

std::vector<TrapPair> generate_campaign_traps(const Campaign& campaign, LengthUnit unit) {
  std::vector<TrapPair> all;
  const auto tasks = campaign.config.tasks();
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto segs = campaign.segments_of(tasks[t].direction);
    auto traps = generate_traps(segs, tasks[t].ratio, campaign.config.traps_per_annotator,
                                derive_seed(campaign.config.seed, "traps", t), unit);
    all.insert(all.end(), traps.begin(), traps.end());
  }
  return all;
}

std::string serialize_traps(const std::vector<TrapPair>& traps) {
  std::string out;
  for (const auto& t : traps) {
    nlohmann::ordered_json obj;
    obj["direction"] = t.direction;
    obj["seg_id"] = t.seg_id;
    obj["ratio"] = t.ratio;
    obj["truncated_text"] = t.truncated_text;
    obj["original_reference"] = t.original_reference;
    out += obj.dump() + "\n";
  }
  return out;
}

std::vector<TrapPair> parse_traps(std::string_view jsonl, const std::string& source) {
  std::vector<TrapPair> out;
  std::size_t line_no = 0, start = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    auto line = trim(jsonl.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      auto obj = nlohmann::json::parse(line);
      TrapPair t;
      t.direction = obj.at("direction").get<std::string>();
      t.seg_id = obj.at("seg_id").get<std::string>();
      t.ratio = obj.at("ratio").get<double>();
      t.truncated_text = obj.at("truncated_text").get<std::string>();
      t.original_reference = obj.at("original_reference").get<std::string>();
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

TrapBuckets trap_report(std::span<const RatingRecord> trap_ratings) {
  TrapBuckets b;
  for (const auto& r : trap_ratings) {
    if (!r.is_trap) throw Error(ErrorCode::kInvalidArgument, "trap_report given a non-trap rating");
    if (r.raw_score == 0) {
      ++b.zero;
    } else if (r.raw_score <= 20) {
      ++b.low;
    } else {
      ++b.high;
    }
  }
  return b;
}

TimingReport timing_report(std::span<const RatingRecord> ratings, double cutoff_s) {
  if (ratings.empty()) throw Error(ErrorCode::kEmptySet, "timing report of no ratings");
  TimingReport t;
  double all = 0.0, cut = 0.0;
  for (const auto& r : ratings) {
    all += r.duration_s;
    if (r.duration_s < cutoff_s) {
      cut += r.duration_s;
      ++t.n_cut;
    }
  }
  t.n_all = ratings.size();
  t.all_ave = all / static_cast<double>(t.n_all);
  if (t.n_cut > 0) t.cut_ave = cut / static_cast<double>(t.n_cut);
  return t;
}

std::vector<NormalizedRating> znormalize(std::span<const RatingRecord> ratings, bool include_traps) {
  std::map<std::pair<std::string, Task>, std::vector<std::size_t>> groups;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    if (ratings[i].is_trap && !include_traps) continue;
    groups[{ratings[i].annotator_id, ratings[i].task()}].push_back(i);
    kept.push_back(i);
  }
  std::map<std::pair<std::string, Task>, std::pair<double, double>> stats;  // mean, sd
  for (const auto& [key, idx] : groups) {
    double mean = 0.0;
    for (auto i : idx) mean += ratings[i].raw_score;
    mean /= static_cast<double>(idx.size());
    double ss = 0.0;
    bool distinct = false;
    for (auto i : idx) {
      const double d = ratings[i].raw_score - mean;
      ss += d * d;
      distinct |= ratings[i].raw_score != ratings[idx.front()].raw_score;
    }
    if (!distinct)
      throw Error(ErrorCode::kZeroVariance,
                  "annotator '" + key.first + "' gave a single distinct score in " + task_label(key.second));
    stats[key] = {mean, std::sqrt(ss / static_cast<double>(idx.size()))};
  }
  std::vector<NormalizedRating> out;
  out.reserve(kept.size());
  for (auto i : kept) {
    const auto& [mean, sd] = stats.at({ratings[i].annotator_id, ratings[i].task()});
    out.push_back({ratings[i], (ratings[i].raw_score - mean) / sd});
  }
  return out;
}

double HumanSegmentScores::at(const Task& task, const std::string& system, const std::string& seg_id) const {
  auto it = scores.find({task, system, seg_id});
  if (it == scores.end())
    throw Error(ErrorCode::kMissingKey,
                "no human rating for system '" + system + "' segment '" + seg_id + "' in " + task_label(task));
  return it->second;
}

HumanSegmentScores aggregate_segment_human(std::span<const NormalizedRating> normalized, int annotators_per_task) {
  HumanSegmentScores out;
  std::map<HumanSegmentScores::Key, double> sums;
  for (const auto& n : normalized) {
    if (n.rating.is_trap) continue;
    HumanSegmentScores::Key key{n.rating.task(), n.rating.system_id, n.rating.seg_id};
    sums[key] += n.z;
    ++out.rating_counts[key];
  }
  for (const auto& [key, sum] : sums) {
    const int count = out.rating_counts[key];
    out.scores[key] = sum / count;
    if (count < annotators_per_task)
      out.warnings.push_back(task_label(std::get<0>(key)) + " system '" + std::get<1>(key) + "' segment '" +
                             std::get<2>(key) + "' has " + std::to_string(count) + " of " +
                             std::to_string(annotators_per_task) + " ratings");
  }
  return out;
}

ScoreTable human_table(const HumanSegmentScores& human, const Task& task, const std::vector<std::string>& systems,
                       const std::vector<std::string>& segments) {
  ScoreTable table("human", "", task, systems, segments);
  for (std::size_t s = 0; s < systems.size(); ++s)
    for (std::size_t g = 0; g < segments.size(); ++g) table.at(s, g) = human.at(task, systems[s], segments[g]);
  return table;
}

RatingMatrix build_rating_matrix(std::span<const RatingRecord> ratings, bool include_traps, RatingScale scale) {
  std::vector<NormalizedRating> rows;
  if (scale == RatingScale::kZ) {
    rows = znormalize(ratings, include_traps);
  } else {
    for (const auto& r : ratings)
      if (!r.is_trap || include_traps) rows.push_back({r, static_cast<double>(r.raw_score)});
  }
  std::set<std::string> annotator_set, item_set;
  auto item_key = [](const RatingRecord& r) {
    return r.seg_id + "|" + r.system_id + (r.is_trap ? "|trap" : "");
  };
  for (const auto& row : rows) {
    annotator_set.insert(row.rating.annotator_id);
    item_set.insert(item_key(row.rating));
  }
  RatingMatrix m;
  m.annotators.assign(annotator_set.begin(), annotator_set.end());
  m.items.assign(item_set.begin(), item_set.end());
  std::vector<double> sums(m.items.size() * m.annotators.size(), 0.0);
  std::vector<int> counts(sums.size(), 0);
  for (const auto& row : rows) {
    const auto a = static_cast<std::size_t>(
        std::lower_bound(m.annotators.begin(), m.annotators.end(), row.rating.annotator_id) - m.annotators.begin());
    const auto it = static_cast<std::size_t>(
        std::lower_bound(m.items.begin(), m.items.end(), item_key(row.rating)) - m.items.begin());
    sums[it * m.annotators.size() + a] += row.z;
    ++counts[it * m.annotators.size() + a];
  }
  m.values.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i)
    m.values[i] = counts[i] ? sums[i] / counts[i] : std::numeric_limits<double>::quiet_NaN();
  return m;
}

double one_vs_rest(const RatingMatrix& m) {
  const std::size_t k = m.annotators.size();
  if (k < 2) throw Error(ErrorCode::kInsufficientOverlap, "one-vs-rest needs at least 2 annotators");
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<double> mine, rest;
    for (std::size_t item = 0; item < m.items.size(); ++item) {
      const double own = m.at(item, a);
      if (std::isnan(own)) continue;
      double sum = 0.0;
      int n = 0;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a || std::isnan(m.at(item, b))) continue;
        sum += m.at(item, b);
        ++n;
      }
      if (n == 0) continue;
      mine.push_back(own);
      rest.push_back(sum / n);
    }
    if (mine.size() < 3)
      throw Error(ErrorCode::kInsufficientOverlap,
                  "annotator '" + m.annotators[a] + "' shares " + std::to_string(mine.size()) + " items with the rest");
    total += pearson(mine, rest).value;
  }
  return total / static_cast<double>(k);
}

double krippendorff_alpha(const RatingMatrix& m) {
  const std::size_t k = m.annotators.size();
  // Sum over ordered within-unit pairs of (a - b)^2 equals 2 * m_u * SS_u.
  double observed = 0.0;
  std::vector<double> pooled;
  for (std::size_t item = 0; item < m.items.size(); ++item) {
    std::vector<double> unit;
    for (std::size_t a = 0; a < k; ++a)
      if (!std::isnan(m.at(item, a))) unit.push_back(m.at(item, a));
    if (unit.size() < 2) continue;
    const double mu = std::accumulate(unit.begin(), unit.end(), 0.0) / static_cast<double>(unit.size());
    double ss = 0.0;
    for (double v : unit) ss += (v - mu) * (v - mu);
    const double mu_count = static_cast<double>(unit.size());
    observed += 2.0 * mu_count * ss / (mu_count - 1.0);
    pooled.insert(pooled.end(), unit.begin(), unit.end());
  }
  if (pooled.empty()) throw Error(ErrorCode::kNoPairableUnits, "no unit has two or more ratings");
  const double n = static_cast<double>(pooled.size());
  const double grand = std::accumulate(pooled.begin(), pooled.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : pooled) ss += (v - grand) * (v - grand);
  const double expected_sum = 2.0 * n * ss;
  if (expected_sum == 0.0) return 1.0;
  const double d_o = observed / n;
  const double d_e = expected_sum / (n * (n - 1.0));
  return 1.0 - d_o / d_e;
}

AgreementResult agreement(std::span<const RatingRecord> task_ratings, bool include_traps, RatingScale scale) {
  const RatingMatrix m = build_rating_matrix(task_ratings, include_traps, scale);
  AgreementResult out;
  out.one_vs_rest_r = one_vs_rest(m);
  out.krippendorff_alpha = krippendorff_alpha(m);
  out.with_traps = include_traps;
  out.n_items = m.items.size();
  return out;
}

}  // namespace lcmeval

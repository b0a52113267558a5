// include/lcmeval/ratings.hpp
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

// Human direct-assessment ratings: trap construction and auditing, timing,
// per-annotator z-normalization, segment aggregation and agreement.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lcmeval/campaign.hpp"
#include "lcmeval/score_table.hpp"

namespace lcmeval {

// ---------------------------------------------------------------------------
// Trap samples: a reference prefix paired with the full reference.

struct TrapPair {
  std::string direction;
  std::string seg_id;
  std::string truncated_text;
  std::string original_reference;
  double ratio = 0.5;
  bool operator==(const TrapPair&) const = default;
};

/// Samples `count` distinct segments of one direction without replacement
/// and keeps floor(ratio * n) leading length units of each reference.
/// Output is ordered by seg_id.
std::vector<TrapPair> generate_traps(std::span<const SegmentRecord* const> segments, double ratio, int count,
                                     std::uint64_t seed, LengthUnit unit);

/// traps_per_annotator x annotators x ratios x directions.
long long trap_annotation_count(const CampaignConfig& config);

/// One trap set per task, seeded from the campaign seed.
std::vector<TrapPair> generate_campaign_traps(const Campaign& campaign, LengthUnit unit);

std::string serialize_traps(const std::vector<TrapPair>& traps);
std::vector<TrapPair> parse_traps(std::string_view jsonl, const std::string& source_name = "traps.jsonl");

// ---------------------------------------------------------------------------
// Quality control.

struct TrapBuckets {
  long long zero = 0;  // score == 0
  long long low = 0;   // 0 < score <= 20
  long long high = 0;  // score > 20
  long long total() const { return zero + low + high; }
  bool operator==(const TrapBuckets&) const = default;
};

TrapBuckets trap_report(std::span<const RatingRecord> trap_ratings);

struct TimingReport {
  double all_ave = 0.0;
  std::optional<double> cut_ave;  // absent when every duration reaches the cutoff
  std::size_t n_all = 0;
  std::size_t n_cut = 0;
};

/// cut_ave averages durations strictly below cutoff_s.
TimingReport timing_report(std::span<const RatingRecord> ratings, double cutoff_s = 600.0);

// ---------------------------------------------------------------------------
// Normalization and aggregation.

struct NormalizedRating {
  RatingRecord rating;
  double z = 0.0;
};

/// z = (raw - mean) / population sd within each (annotator, task) group.
/// Traps enter the group statistics only when include_traps is set, and only
/// the records that entered the statistics are returned.
std::vector<NormalizedRating> znormalize(std::span<const RatingRecord> ratings, bool include_traps);

struct HumanSegmentScores {
  using Key = std::tuple<Task, std::string, std::string>;  // task, system, seg
  std::map<Key, double> scores;
  std::map<Key, int> rating_counts;
  std::vector<std::string> warnings;

  /// Throws MissingKey.
  double at(const Task& task, const std::string& system, const std::string& seg_id) const;
};

/// Mean z over annotators per (task, system, segment), trap ratings excluded.
/// Keys with fewer than annotators_per_task ratings are kept with a warning.
HumanSegmentScores aggregate_segment_human(std::span<const NormalizedRating> normalized, int annotators_per_task);

/// Dense human ScoreTable ("human") for one task; MissingKey if any cell has
/// no rating.
ScoreTable human_table(const HumanSegmentScores& human, const Task& task, const std::vector<std::string>& systems,
                       const std::vector<std::string>& segments);

// ---------------------------------------------------------------------------
// Agreement.

enum class RatingScale { kRaw, kZ };

/// Items x annotators grid. Items are (seg, system, trap) triples; NaN marks
/// an item the annotator did not rate. Repeated ratings are averaged.
struct RatingMatrix {
  std::vector<std::string> annotators;
  std::vector<std::string> items;
  std::vector<double> values;  // row-major, items x annotators

  double at(std::size_t item, std::size_t annotator) const { return values[item * annotators.size() + annotator]; }
};

RatingMatrix build_rating_matrix(std::span<const RatingRecord> ratings, bool include_traps, RatingScale scale);

/// Mean over annotators of Pearson(annotator, mean of the other annotators)
/// on items shared with at least one other annotator.
double one_vs_rest(const RatingMatrix& matrix);

/// Interval-metric Krippendorff's alpha. Units with fewer than two values are
/// not pairable and are skipped. Returns 1 when all pairable values agree.
double krippendorff_alpha(const RatingMatrix& matrix);

struct AgreementResult {
  double one_vs_rest_r = 0.0;
  double krippendorff_alpha = 0.0;
  bool with_traps = false;
  std::size_t n_items = 0;
};

AgreementResult agreement(std::span<const RatingRecord> task_ratings, bool include_traps, RatingScale scale);

}  // namespace lcmeval

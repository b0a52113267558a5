// include/lcmeval/campaign.hpp
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

// Campaign data: configuration, corpus segments, system outputs, human
// ratings and externally computed metric scores.
//
// On-disk layout (all UTF-8, LF line endings):
//   campaign.conf     flat key = value lines, '#' comments
//   segments.jsonl    {"seg_id","direction","source_text","reference_text"[,"reference_length"]}
//   hypotheses.jsonl  {"system_id","seg_id","length_ratio","text"[,"direction"][,"length"]}
//   ratings.csv       annotator,seg_id,system,ratio,score,duration_s,is_trap[,direction]
//   scores TSV        metric<TAB>variant<TAB>system<TAB>seg_id<TAB>score, one file per task
//
// When a record carries no direction, its seg_id must be unique across all
// directions of the campaign.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "lcmeval/score_table.hpp"
#include "lcmeval/types.hpp"

namespace lcmeval {

struct ScoreFileRef {
  Task task;
  std::string path;
  bool operator==(const ScoreFileRef&) const = default;
};

struct CampaignConfig {
  std::vector<std::string> directions;
  std::vector<double> length_ratios;
  std::vector<std::string> systems;
  int annotators_per_task = 1;
  int traps_per_annotator = 0;
  LengthUnit length_unit = LengthUnit::kCharacters;
  std::uint64_t seed = 0;

  // Data paths as written in the file; resolved against base_dir.
  std::string segments_path;
  std::string hypotheses_path;
  std::string ratings_path;
  std::vector<ScoreFileRef> score_files;
  std::filesystem::path base_dir;

  /// Direction-major, ratios in configured order.
  std::vector<Task> tasks() const;
  std::filesystem::path resolve(const std::string& relative) const;

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
};

CampaignConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::string& source_name = "campaign.conf");
CampaignConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const CampaignConfig& config);

/// Settings equality, ignoring where the data files live.
bool same_settings(const CampaignConfig& a, const CampaignConfig& b);

struct SegmentRecord {
  std::string seg_id;
  std::string direction;
  std::string source_text;
  std::string reference_text;
  std::optional<long long> reference_length;
  bool operator==(const SegmentRecord&) const = default;
};

struct HypothesisRecord {
  std::string system_id;
  std::string seg_id;
  std::string direction;
  double length_ratio = 1.0;
  std::string text;
  std::optional<long long> length;  // only used with provided-counts
  Task task() const { return {direction, length_ratio}; }
  bool operator==(const HypothesisRecord&) const = default;
};

struct RatingRecord {
  std::string annotator_id;
  std::string direction;
  double length_ratio = 1.0;
  std::string seg_id;
  std::string system_id;
  int raw_score = 0;
  double duration_s = 0.0;
  bool is_trap = false;
  Task task() const { return {direction, length_ratio}; }
  bool operator==(const RatingRecord&) const = default;
};

class Campaign {
 public:
  CampaignConfig config;
  std::vector<SegmentRecord> segments;
  std::vector<HypothesisRecord> hypotheses;
  std::vector<RatingRecord> ratings;
  std::map<Task, std::vector<ScoreTable>> external_scores;

  /// Rebuilds lookup indexes; call after mutating the record vectors.
  void reindex();

  /// Sorted seg ids of one direction.
  std::vector<std::string> segment_ids(const std::string& direction) const;
  std::vector<const SegmentRecord*> segments_of(const std::string& direction) const;
  const SegmentRecord* find_segment(const std::string& direction, const std::string& seg_id) const;
  const SegmentRecord& segment(const std::string& direction, const std::string& seg_id) const;
  const HypothesisRecord* find_hypothesis(const Task& task, const std::string& system,
                                          const std::string& seg_id) const;
  std::vector<RatingRecord> ratings_for(const Task& task) const;

  /// Field-by-field equality of all data, ignoring file locations.
  bool equivalent(const Campaign& other) const;

 private:
  std::map<std::pair<std::string, std::string>, std::size_t> segment_index_;
  std::map<std::tuple<std::string, double, std::string, std::string>, std::size_t> hypothesis_index_;
};

Campaign load_campaign(const std::filesystem::path& config_path);

/// Writes the campaign under `dir` with canonical file names and returns the
/// path of the written campaign.conf.
std::filesystem::path write_campaign(const Campaign& campaign, const std::filesystem::path& dir);

/// One dense table per (metric, variant), ordered by (metric, variant).
std::vector<ScoreTable> load_external_scores(const std::filesystem::path& path, const Task& task,
                                             const std::vector<std::string>& segment_ids,
                                             const std::vector<std::string>& systems);

/// Parses the same format from memory; `source_name` is used in messages.
std::vector<ScoreTable> parse_external_scores(std::string_view text, const Task& task,
                                              const std::vector<std::string>& segment_ids,
                                              const std::vector<std::string>& systems,
                                              const std::string& source_name);

/// Writes segment-level tables in the scores TSV format.
std::string serialize_score_tables(const std::vector<ScoreTable>& tables);

struct MissingCell {
  Task task;
  std::string seg_id;
  std::string system_id;
  int missing_slots = 0;
};

struct DuplicateRating {
  std::string annotator_id;
  Task task;
  std::string seg_id;
  std::string system_id;
  int count = 0;
};

struct ValidationReport {
  long long expected_rating_count = 0;
  long long found_rating_count = 0;
  std::vector<MissingCell> missing_cells;
  std::vector<DuplicateRating> duplicate_cells;
  std::vector<std::string> warnings;

  bool ok() const { return missing_cells.empty() && duplicate_cells.empty(); }
};

/// Sum over directions of |segments| x |systems| x |ratios| x annotators.
long long expected_rating_count(const std::vector<long long>& segments_per_direction,
                                long long systems, long long ratios, long long annotators);

ValidationReport validate_campaign(const Campaign& campaign);

std::string format_validation_report(const ValidationReport& report);

/// Reads a whole file; MissingFile if it does not exist.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lcmeval

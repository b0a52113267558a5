// include/lcmeval/pipeline.hpp
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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcmeval/campaign.hpp"
#include "lcmeval/lexical.hpp"
#include "lcmeval/meta_eval.hpp"
#include "lcmeval/ratings.hpp"
#include "lcmeval/report.hpp"

namespace lcmeval {

struct PipelineOptions {
  std::optional<std::uint64_t> seed;  // overrides the campaign seed
  std::size_t hybrids = 1000;
  std::size_t permutations = 1000;
  std::size_t bootstrap = 1000;
  double alpha = 0.05;
  double confidence = 0.95;
  double timing_cutoff = 600.0;
  bool include_traps = false;  // traps in z-normalization statistics
  RatingScale agreement_scale = RatingScale::kRaw;
  std::optional<LengthUnit> length_unit;
  std::optional<Level> level;  // restricts correlate/significance output
  std::vector<SigFormat> sig_formats = {SigFormat::kCsv, SigFormat::kTextGrid, SigFormat::kSvg};
  unsigned threads = 1;
};

/// Native lexical metrics of one task.
struct NativeScores {
  Task task;
  std::vector<ScoreTable> rouge;  // ROUGE1-P ... ROUGEL-F1
  ScoreTable length_deviation;    // per-cell |out - expect| / expect
  std::vector<LengthRecord> length_records;  // systems x segments
  CorpusStatTable bleu;
  CorpusStatTable bleu_star;
};

/// Throws IncompleteTable when a hypothesis is missing.
NativeScores score_command(const Campaign& campaign, const Task& task, LengthUnit unit);

/// One metric as it enters correlation and significance tables.
struct MetricSeries {
  std::string name;
  bool segment_level = true;
  std::map<Task, ScoreTable> tables;       // segment-level metrics
  std::map<Task, CorpusStatTable> corpus;  // corpus-level metrics
};

/// Everything shared by the correlation, significance and system stages.
struct Evaluation {
  std::uint64_t seed = 0;
  LengthUnit unit = LengthUnit::kCharacters;
  std::vector<Task> tasks;
  std::map<Task, NativeScores> native;
  std::vector<NormalizedRating> normalized;
  HumanSegmentScores human;
  std::vector<TaskContext> contexts;  // parallel to tasks
  std::vector<VariantSelection> selections;
  std::vector<MetricSeries> metrics;  // ROUGE, BLEU*, then external metrics by id
};

Evaluation build_evaluation(const Campaign& campaign, const PipelineOptions& options);

enum class Stage { kValidate, kTraps, kQc, kNormalize, kScore, kCorrelate, kSignificance, kSysCompare, kRun };

/// "validate", "traps", ...; throws InvalidArgument.
Stage parse_stage(std::string_view name);
const char* stage_name(Stage stage);

using ArtifactSet = std::map<std::string, std::string>;  // file name -> content

/// Report files of one stage. kRun yields the full set and throws
/// IncompleteTable when the campaign fails validation.
ArtifactSet stage_artifacts(Stage stage, const Campaign& campaign, const PipelineOptions& options);

struct ManifestEntry {
  std::string file;
  std::string digest;
  bool operator==(const ManifestEntry&) const = default;
};

struct PipelineArtifacts {
  std::vector<ManifestEntry> files;  // sorted by file name
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string version;
  bool operator==(const PipelineArtifacts&) const = default;
};

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string content_digest(std::string_view content);

std::string serialize_manifest(const PipelineArtifacts& artifacts);
PipelineArtifacts parse_manifest(std::string_view text, const std::string& source_name = "manifest.tsv");

/// Writes every file plus manifest.tsv into out_dir.
PipelineArtifacts write_artifacts(const ArtifactSet& files, const Campaign& campaign, const PipelineOptions& options,
                                  const std::filesystem::path& out_dir);

PipelineArtifacts run_pipeline(const Campaign& campaign, const std::filesystem::path& out_dir,
                               const PipelineOptions& options);

const char* library_version();

}  // namespace lcmeval

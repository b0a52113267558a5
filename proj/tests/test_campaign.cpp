// tests/test_campaign.cpp
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

#include <filesystem>
#include <functional>
#include <string>

#include "lcmeval/campaign.hpp"
#include "lcmeval/error.hpp"
#include "lcmeval/ratings.hpp"

using namespace lcmeval;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = fs::path(LCMEVAL_FIXTURE_DIR) / "campaign.conf";

constexpr const char* kMinimalConfig =
    "directions = en-zh, zh-en\n"
    "ratios = 0.8, 0.5\n"
    "systems = a, b\n"
    "annotators_per_task = 3\n"
    "traps_per_annotator = 60\n"
    "length_unit = characters\n"
    "seed = 7\n"
    "segments = s.jsonl\n"
    "hypotheses = h.jsonl\n"
    "ratings = r.csv\n";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kInvalidArgument;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lcmeval_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesAllKeys) {
  const auto c = parse_config(std::string(kMinimalConfig) + "scores = en-zh:0.8:dir/x:y.tsv\n", "/base");
  EXPECT_EQ(c.directions, (std::vector<std::string>{"en-zh", "zh-en"}));
  EXPECT_EQ(c.length_ratios, (std::vector<double>{0.8, 0.5}));
  EXPECT_EQ(c.annotators_per_task, 3);
  EXPECT_EQ(c.traps_per_annotator, 60);
  EXPECT_EQ(c.seed, 7u);
  ASSERT_EQ(c.score_files.size(), 1u);
  EXPECT_EQ(c.score_files[0].path, "dir/x:y.tsv");
  EXPECT_EQ(c.resolve("s.jsonl"), fs::path("/base/s.jsonl"));
  const auto tasks = c.tasks();
  ASSERT_EQ(tasks.size(), 4u);
  EXPECT_EQ(tasks[1], (Task{"en-zh", 0.5}));
  EXPECT_EQ(tasks[2], (Task{"zh-en", 0.8}));
}

TEST(Config, SerializeRoundTrip) {
  const auto c = parse_config(kMinimalConfig, "/base");
  const auto again = parse_config(serialize_config(c), "/elsewhere");
  EXPECT_TRUE(same_settings(c, again));
}

TEST(Config, RejectsMalformedInput) {
  const std::string base = kMinimalConfig;
  EXPECT_EQ(code_of([&] { parse_config(base + "colour = red\n", "."); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { parse_config(base + "seed = 8\n", "."); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { parse_config(base + "no equals sign\n", "."); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { parse_config(base + "scores = fr-de:0.8:x.tsv\n", "."); }), ErrorCode::kParseError);
  std::string bad_ratio = base;
  bad_ratio.replace(bad_ratio.find("0.8, 0.5"), 8, "1.5");
  EXPECT_EQ(code_of([&] { parse_config(bad_ratio, "."); }), ErrorCode::kParseError);
  std::string dup_system = base;
  dup_system.replace(dup_system.find("a, b"), 4, "a, a");
  EXPECT_EQ(code_of([&] { parse_config(dup_system, "."); }), ErrorCode::kParseError);
  std::string missing = base;
  missing.erase(missing.find("seed = 7\n"), 9);
  EXPECT_EQ(code_of([&] { parse_config(missing, "."); }), ErrorCode::kParseError);
}

TEST(Config, MissingFileIsIoCategory) {
  EXPECT_EQ(code_of([] { load_config("/nonexistent/campaign.conf"); }), ErrorCode::kMissingFile);
  EXPECT_EQ(error_category(ErrorCode::kMissingFile), ErrorCategory::kIo);
}

TEST(Campaign, ExpectedRatingCountArithmetic) {
  EXPECT_EQ(expected_rating_count({270, 270}, 2, 2, 3), 6480);
  EXPECT_EQ(expected_rating_count({12, 12}, 3, 2, 3), 432);
  EXPECT_EQ(expected_rating_count({}, 3, 2, 3), 0);
  const auto c = parse_config(kMinimalConfig, ".");
  EXPECT_EQ(trap_annotation_count(c), 720);
}

TEST(Campaign, LoadsFixture) {
  const auto c = load_campaign(kFixture);
  EXPECT_EQ(c.segments.size(), 24u);
  EXPECT_EQ(c.hypotheses.size(), 24u * 2 * 3);
  EXPECT_EQ(c.ratings.size(), 432u + 4u * 3 * 4);
  EXPECT_EQ(c.segment_ids("en-zh").size(), 12u);
  EXPECT_EQ(c.segment_ids("en-zh").front(), "enzh-001");
  ASSERT_NE(c.find_hypothesis({"zh-en", 0.5}, "trans-sum", "zhen-003"), nullptr);
  EXPECT_EQ(c.find_hypothesis({"zh-en", 0.5}, "trans-sum", "enzh-003"), nullptr);
  EXPECT_EQ(c.ratings_for({"en-zh", 0.8}).size(), 108u + 12u);
  ASSERT_EQ(c.external_scores.size(), 4u);
  const auto& tables = c.external_scores.at({"en-zh", 0.8});
  ASSERT_EQ(tables.size(), 5u);
  for (const auto& t : tables) EXPECT_TRUE(t.is_dense());
  EXPECT_EQ(tables[0].metric_id, "BERTScore.bert-base-multilingual-cased");

  const auto report = validate_campaign(c);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.expected_rating_count, 432);
  EXPECT_EQ(report.found_rating_count, 432);
  EXPECT_TRUE(report.warnings.empty()) << format_validation_report(report);
}

TEST(Campaign, WriteRoundTripIsEquivalent) {
  const auto original = load_campaign(kFixture);
  const auto dir = scratch("roundtrip");
  const auto conf = write_campaign(original, dir);
  const auto again = load_campaign(conf);
  EXPECT_TRUE(original.equivalent(again));
  const auto conf2 = write_campaign(again, scratch("roundtrip2"));
  const auto third = load_campaign(conf2);
  EXPECT_EQ(read_file(conf), read_file(conf2));
  EXPECT_TRUE(again.equivalent(third));
}

TEST(Campaign, ValidationReportsMissingAndDuplicateCells) {
  auto c = load_campaign(kFixture);
  // Drop one rating and duplicate another.
  const auto dropped = c.ratings.front();
  c.ratings.erase(c.ratings.begin());
  c.ratings.push_back(c.ratings.front());
  c.reindex();
  const auto report = validate_campaign(c);
  EXPECT_FALSE(report.ok());
  ASSERT_EQ(report.missing_cells.size(), 1u);
  EXPECT_EQ(report.missing_cells[0].seg_id, dropped.seg_id);
  EXPECT_EQ(report.missing_cells[0].system_id, dropped.system_id);
  EXPECT_EQ(report.missing_cells[0].missing_slots, 1);
  ASSERT_EQ(report.duplicate_cells.size(), 1u);
  EXPECT_EQ(report.duplicate_cells[0].count, 2);
  EXPECT_NE(format_validation_report(report).find("missing\t"), std::string::npos);
}

TEST(ExternalScores, ParseAndErrors) {
  const std::vector<std::string> segs{"s2", "s1"}, systems{"A", "B"};
  const Task task{"en-zh", 0.5};
  const std::string header = "metric\tvariant\tsystem\tseg_id\tscore\n";
  const std::string full = header + "M\t\tA\ts1\t0.1\nM\t\tA\ts2\t0.2\nM\t\tB\ts1\t0.3\nM\t\tB\ts2\t0.4\n";
  const auto tables = parse_external_scores(full, task, segs, systems, "x.tsv");
  ASSERT_EQ(tables.size(), 1u);
  EXPECT_EQ(tables[0].segments, (std::vector<std::string>{"s1", "s2"}));
  EXPECT_DOUBLE_EQ(tables[0].at(1, 1), 0.4);
  EXPECT_EQ(parse_external_scores(serialize_score_tables(tables), task, segs, systems, "y.tsv"), tables);

  auto code = [&](const std::string& text) {
    return code_of([&] { parse_external_scores(text, task, segs, systems, "x.tsv"); });
  };
  EXPECT_EQ(code(header + "M\t\tA\ts1\t0.1\n"), ErrorCode::kIncompleteTable);
  EXPECT_EQ(code(full + "M\t\tA\ts1\t0.5\n"), ErrorCode::kDuplicateCell);
  EXPECT_EQ(code(full + "N\t\tA\ts9\t0.5\n"), ErrorCode::kUnknownSegment);
  EXPECT_EQ(code(full + "N\t\tZ\ts1\t0.5\n"), ErrorCode::kUnresolvedReference);
  EXPECT_EQ(code(full + "N\t\tA\ts1\tinf\n"), ErrorCode::kNonFiniteScore);
  EXPECT_EQ(code(full + "N\t\tA\ts1\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("bad header\n"), ErrorCode::kParseError);
}

TEST(Campaign, BrokenReferencesAreRejected) {
  const auto dir = scratch("broken");
  write_file(dir / "s.jsonl",
             "{\"seg_id\":\"x1\",\"direction\":\"en-zh\",\"source_text\":\"a\",\"reference_text\":\"b\"}\n");
  write_file(dir / "h.jsonl", "{\"system_id\":\"a\",\"seg_id\":\"x1\",\"length_ratio\":0.8,\"text\":\"b\"}\n");
  write_file(dir / "r.csv",
             "annotator,seg_id,system,ratio,score,duration_s,is_trap\nann,x1,zzz,0.8,50,10,0\n");
  std::string conf = kMinimalConfig;
  conf.replace(conf.find("en-zh, zh-en"), 12, "en-zh");
  write_file(dir / "campaign.conf", conf);
  EXPECT_EQ(code_of([&] { load_campaign(dir / "campaign.conf"); }), ErrorCode::kUnresolvedReference);

  write_file(dir / "r.csv", "annotator,seg_id,system,ratio,score,duration_s,is_trap\nann,x1,a,0.8,101,10,0\n");
  EXPECT_EQ(code_of([&] { load_campaign(dir / "campaign.conf"); }), ErrorCode::kParseError);

  write_file(dir / "r.csv", "annotator,seg_id,system,ratio,score,duration_s,is_trap\nann,x2,a,0.8,50,10,0\n");
  EXPECT_EQ(code_of([&] { load_campaign(dir / "campaign.conf"); }), ErrorCode::kUnresolvedReference);

  write_file(dir / "r.csv", "annotator,seg_id,system,ratio,score,duration_s,is_trap\nann,x1,a,0.3,50,10,0\n");
  EXPECT_EQ(code_of([&] { load_campaign(dir / "campaign.conf"); }), ErrorCode::kParseError);

  fs::remove(dir / "r.csv");
  EXPECT_EQ(code_of([&] { load_campaign(dir / "campaign.conf"); }), ErrorCode::kMissingFile);
}

// tests/test_basics.cpp
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

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "lcmeval/error.hpp"
#include "lcmeval/parallel.hpp"
#include "lcmeval/rng.hpp"
#include "lcmeval/types.hpp"

using namespace lcmeval;

TEST(Error, CategoriesMapToExitCodes) {
  EXPECT_EQ(error_category(ErrorCode::kMissingFile), ErrorCategory::kIo);
  EXPECT_EQ(error_category(ErrorCode::kIoError), ErrorCategory::kIo);
  EXPECT_EQ(error_category(ErrorCode::kParseError), ErrorCategory::kValidation);
  EXPECT_EQ(error_category(ErrorCode::kUnsupportedFormat), ErrorCategory::kValidation);
  EXPECT_EQ(error_category(ErrorCode::kZeroVariance), ErrorCategory::kStatistical);
  EXPECT_EQ(error_category(ErrorCode::kSampleTooSmall), ErrorCategory::kStatistical);
  EXPECT_EQ(static_cast<int>(ErrorCategory::kValidation), 1);
  EXPECT_EQ(static_cast<int>(ErrorCategory::kIo), 2);
  EXPECT_EQ(static_cast<int>(ErrorCategory::kStatistical), 3);
}

TEST(Error, MessageNamesTheCode) {
  const Error e(ErrorCode::kMissingFile, "ratings.csv");
  EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  EXPECT_NE(std::string(e.what()).find("MissingFile"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("ratings.csv"), std::string::npos);
}

TEST(Types, TaskLabelRoundTrip) {
  const Task t{"en-zh", 0.8};
  EXPECT_EQ(task_label(t), "en-zh_0.8");
  EXPECT_EQ(parse_task_label("en-zh_0.8"), t);
  EXPECT_EQ(parse_task_label("a_b-c_0.5"), (Task{"a_b-c", 0.5}));
  EXPECT_THROW(parse_task_label("nolabel"), Error);
}

TEST(Types, FixedFormattingIsLocaleFreeAndHasNoNegativeZero) {
  EXPECT_EQ(format_fixed4(0.25), "0.2500");
  EXPECT_EQ(format_fixed4(-0.00001), "0.0000");
  EXPECT_EQ(format_fixed4(-0.12345), "-0.1235");
  EXPECT_EQ(format_fixed4(1.0), "1.0000");
}

TEST(Types, ParseNumbers) {
  double d = 0;
  EXPECT_TRUE(parse_double(" 0.5 ", d));
  EXPECT_DOUBLE_EQ(d, 0.5);
  EXPECT_FALSE(parse_double("0.5x", d));
  EXPECT_TRUE(parse_double("nan", d));
  EXPECT_TRUE(std::isnan(d));
  long long i = 0;
  EXPECT_TRUE(parse_int64("-12", i));
  EXPECT_EQ(i, -12);
  unsigned long long u = 0;
  EXPECT_TRUE(parse_uint64("18446744073709551615", u));
  EXPECT_EQ(u, 18446744073709551615ULL);
  EXPECT_FALSE(parse_uint64("-1", u));
}

TEST(Types, NamesRoundTrip) {
  for (auto unit : {LengthUnit::kCharacters, LengthUnit::kWhitespaceTokens, LengthUnit::kProvidedCounts})
    EXPECT_EQ(parse_length_unit(length_unit_name(unit)), unit);
  for (auto level : {Level::kSystem, Level::kSegment}) EXPECT_EQ(parse_level(level_name(level)), level);
  EXPECT_THROW(parse_length_unit("subwords"), Error);
}

TEST(Rng, DerivedSeedsDependOnEveryInput) {
  const auto base = derive_seed(1, "hybrid", 0);
  EXPECT_EQ(base, derive_seed(1, "hybrid", 0));
  EXPECT_NE(base, derive_seed(2, "hybrid", 0));
  EXPECT_NE(base, derive_seed(1, "perm", 0));
  EXPECT_NE(base, derive_seed(1, "hybrid", 1));
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  Rng rng(7);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const auto v = rng.below(5);
    ASSERT_LT(v, 5u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Parallel, VisitsEveryIndexOnceAtAnyThreadCount) {
  for (unsigned threads : {1u, 2u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw Error(ErrorCode::kZeroVariance, "boom");
                            }),
               Error);
  EXPECT_NO_THROW(parallel_for(0, 4, [](std::size_t) { throw std::runtime_error("never"); }));
}

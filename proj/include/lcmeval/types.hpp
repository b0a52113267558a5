// include/lcmeval/types.hpp
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

#include <compare>
#include <string>
#include <string_view>

namespace lcmeval {

enum class LengthUnit { kCharacters, kWhitespaceTokens, kProvidedCounts };

/// Granularity of a correlation or significance analysis.
enum class Level { kSystem, kSegment };

/// One annotation task: a translation direction at one target length ratio.
struct Task {
  std::string direction;
  double ratio = 1.0;

  auto operator<=>(const Task&) const = default;
  bool operator==(const Task&) const = default;
};

/// "en-zh_0.8"; used in file names and report rows.
std::string task_label(const Task& task);

/// Inverse of task_label; throws ParseError.
Task parse_task_label(std::string_view label);

/// Shortest decimal form that parses back to the same double ("0.8", "0.5").
std::string format_shortest(double value);

/// Fixed four-decimal rendering with "." separator, independent of locale.
std::string format_fixed4(double value);

/// Strict full-string parse; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, long long& out);
bool parse_uint64(std::string_view text, unsigned long long& out);

std::string_view trim(std::string_view text);

const char* length_unit_name(LengthUnit unit);
LengthUnit parse_length_unit(std::string_view text);

const char* level_name(Level level);
Level parse_level(std::string_view text);

}  // namespace lcmeval

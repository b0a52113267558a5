// src/types.cpp
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

#include "lcmeval/types.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "lcmeval/error.hpp"

namespace lcmeval {

std::string task_label(const Task& task) {
  return task.direction + "_" + format_shortest(task.ratio);
}

Task parse_task_label(std::string_view label) {
  const auto cut = label.rfind('_');
  Task task;
  if (cut == std::string_view::npos || cut == 0 || !parse_double(label.substr(cut + 1), task.ratio))
    throw Error(ErrorCode::kParseError, "bad task label '" + std::string(label) + "'");
  task.direction = std::string(label.substr(0, cut));
  return task;
}

std::string format_shortest(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_fixed4(double value) {
  char buf[64];
  // -0.0000 would break byte-identical goldens across platforms.
  if (std::fabs(value) < 0.00005) value = 0.0;
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec == std::errc() && res.ptr == text.data() + text.size()) return true;
  // from_chars rejects "nan"/"inf" spellings on some inputs; accept them so
  // callers can report NonFiniteScore rather than a parse failure.
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "nan" || lower == "-nan") {
    out = std::nan("");
    return true;
  }
  if (lower == "inf" || lower == "infinity") {
    out = HUGE_VAL;
    return true;
  }
  if (lower == "-inf" || lower == "-infinity") {
    out = -HUGE_VAL;
    return true;
  }
  return false;
}

bool parse_int64(std::string_view text, long long& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

bool parse_uint64(std::string_view text, unsigned long long& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::string_view trim(std::string_view text) {
  const char* ws = " \t\r\n";
  auto b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

const char* length_unit_name(LengthUnit unit) {
  switch (unit) {
    case LengthUnit::kCharacters: return "characters";
    case LengthUnit::kWhitespaceTokens: return "whitespace-tokens";
    case LengthUnit::kProvidedCounts: return "provided-counts";
  }
  return "characters";
}

LengthUnit parse_length_unit(std::string_view text) {
  text = trim(text);
  if (text == "characters") return LengthUnit::kCharacters;
  if (text == "whitespace-tokens") return LengthUnit::kWhitespaceTokens;
  if (text == "provided-counts") return LengthUnit::kProvidedCounts;
  throw Error(ErrorCode::kParseError, "unknown length_unit '" + std::string(text) + "'");
}

const char* level_name(Level level) {
  return level == Level::kSystem ? "system" : "segment";
}

Level parse_level(std::string_view text) {
  text = trim(text);
  if (text == "system") return Level::kSystem;
  if (text == "segment") return Level::kSegment;
  throw Error(ErrorCode::kInvalidArgument, "unknown level '" + std::string(text) + "'");
}

}  // namespace lcmeval

// include/lcmeval/score_table.hpp
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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lcmeval/error.hpp"
#include "lcmeval/types.hpp"

namespace lcmeval {

enum class TableLevel { kSegment, kSystemOnly };

/// Scores of one metric variant over every (system, segment) cell of a task.
/// Systems keep campaign order; segments are sorted lexicographically.
/// Missing cells hold NaN until filled. A system-only table has no segments
/// and one value per system.
struct ScoreTable {
  std::string metric_id;
  std::string variant_id;
  Task task;
  TableLevel level = TableLevel::kSegment;
  std::vector<std::string> systems;
  std::vector<std::string> segments;
  std::vector<double> values;

  ScoreTable() = default;
  ScoreTable(std::string metric, std::string variant, Task t, std::vector<std::string> sys,
             std::vector<std::string> segs, TableLevel lvl = TableLevel::kSegment)
      : metric_id(std::move(metric)),
        variant_id(std::move(variant)),
        task(std::move(t)),
        level(lvl),
        systems(std::move(sys)),
        segments(lvl == TableLevel::kSegment ? std::move(segs) : std::vector<std::string>{}),
        values(systems.size() * (level == TableLevel::kSegment ? segments.size() : 1),
               std::numeric_limits<double>::quiet_NaN()) {}

  std::size_t columns() const { return level == TableLevel::kSegment ? segments.size() : 1; }

  double& at(std::size_t system, std::size_t segment) { return values[system * columns() + segment]; }
  double at(std::size_t system, std::size_t segment) const { return values[system * columns() + segment]; }

  bool is_dense() const {
    for (double v : values)
      if (std::isnan(v)) return false;
    return !values.empty();
  }

  /// Throws IncompleteTable naming the first missing cell.
  void require_dense() const {
    if (values.empty()) throw Error(ErrorCode::kIncompleteTable, "table " + name() + " is empty");
    for (std::size_t s = 0; s < systems.size(); ++s)
      for (std::size_t g = 0; g < columns(); ++g)
        if (std::isnan(at(s, g)))
          throw Error(ErrorCode::kIncompleteTable,
                      "table " + name() + " has no score for system '" + systems[s] + "'" +
                          (level == TableLevel::kSegment ? " segment '" + segments[g] + "'" : ""));
  }

  /// "metric" or "metric/variant".
  std::string name() const { return variant_id.empty() ? metric_id : metric_id + "/" + variant_id; }

  bool operator==(const ScoreTable& other) const {
    if (metric_id != other.metric_id || variant_id != other.variant_id || task != other.task ||
        level != other.level || systems != other.systems || segments != other.segments ||
        values.size() != other.values.size())
      return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const bool a = std::isnan(values[i]), b = std::isnan(other.values[i]);
      if (a != b || (!a && values[i] != other.values[i])) return false;
    }
    return true;
  }
};

}  // namespace lcmeval

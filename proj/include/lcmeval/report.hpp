// include/lcmeval/report.hpp
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

// Report files. Every table is CSV with a header row, LF line endings and
// numbers printed with four decimals and a "." separator.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lcmeval/significance.hpp"

namespace lcmeval {

struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  bool operator==(const ReportTable&) const = default;
};

std::string csv_number(double value);

std::string write_csv(const ReportTable& table);

/// Throws ParseError on ragged rows or unterminated quotes.
ReportTable parse_csv(std::string_view text, const std::string& source_name = "table.csv");
ReportTable load_csv(const std::filesystem::path& path);

enum class SigFormat { kCsv, kTextGrid, kSvg };

/// "csv", "textgrid", "svg"; throws UnsupportedFormat otherwise.
SigFormat parse_sig_format(std::string_view name);
const char* sig_format_extension(SigFormat format);

std::string emit_sig_matrix(const SigMatrix& matrix, SigFormat format);
std::string emit_sig_matrix(const SigMatrix& matrix, std::string_view format);

/// Reads the csv form back. Numbers come back rounded to four decimals.
SigMatrix parse_sig_matrix_csv(std::string_view text, const std::string& source_name = "sig.csv");

}  // namespace lcmeval

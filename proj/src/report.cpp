// src/report.cpp
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

#include "lcmeval/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "lcmeval/campaign.hpp"
#include "lcmeval/error.hpp"

namespace lcmeval {

namespace {

bool needs_quotes(const std::string& field) {
  return field.find_first_of(",\"\n\r") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const std::vector<std::string> kSigHeader = {"task",  "granularity", "row",     "col",         "confidence",
                                             "lower", "upper",       "p_value", "significant", "bonferroni_significant"};

std::string flag(bool b) { return b ? "1" : "0"; }

std::string write_sig_csv(const SigMatrix& m) {
  ReportTable t;
  t.header = kSigHeader;
  for (const auto& c : m.cells) {
    t.add_row({task_label(m.task), level_name(m.level), m.metrics[c.row], m.metrics[c.col], csv_number(m.confidence),
               c.ci ? csv_number(c.ci->lower) : "", c.ci ? csv_number(c.ci->upper) : "",
               c.p_value ? csv_number(*c.p_value) : "", flag(c.significant),
               c.bonferroni_significant ? flag(*c.bonferroni_significant) : ""});
  }
  return write_csv(t);
}

// W: win, b: win surviving Bonferroni, ·: none, -: diagonal.
std::string write_textgrid(const SigMatrix& m) {
  const std::size_t k = m.metrics.size();
  std::ostringstream out;
  out << "# " << task_label(m.task) << " " << level_name(m.level) << "\n";
  const std::size_t width = std::to_string(k).size();
  auto pad = [&](const std::string& s) { return std::string(width + 1 - std::min(width + 1, s.size()), ' ') + s; };
  for (std::size_t i = 0; i < k; ++i) out << pad(std::to_string(i + 1)) << " " << m.metrics[i] << "\n";
  out << "\n" << std::string(width + 1, ' ');
  for (std::size_t j = 0; j < k; ++j) out << pad(std::to_string(j + 1));
  out << "\n";
  for (std::size_t i = 0; i < k; ++i) {
    out << pad(std::to_string(i + 1));
    for (std::size_t j = 0; j < k; ++j) {
      out << std::string(width, ' ');
      if (i == j) {
        out << "-";
        continue;
      }
      const SigCell& c = m.cell(i, j);
      if (!c.significant)
        out << "·";
      else
        out << (c.bonferroni_significant.value_or(false) ? "b" : "W");
    }
    out << "\n";
  }
  return out.str();
}

std::string write_svg(const SigMatrix& m) {
  constexpr int kCell = 18;
  constexpr int kChar = 7;
  const std::size_t k = m.metrics.size();
  std::size_t longest = 1;
  for (const auto& name : m.metrics) longest = std::max(longest, name.size());
  const int margin = static_cast<int>(longest) * kChar + 8;
  const int side = margin + static_cast<int>(k) * kCell + 2;
  const char* win_fill = m.level == Level::kSystem ? "#2e9e44" : "#2f6fd6";

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "<title>" << xml_escape(task_label(m.task)) << " " << level_name(m.level) << "</title>\n";
  out << "<rect width=\"" << side << "\" height=\"" << side << "\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < k; ++i) {
    const int pos = margin + static_cast<int>(i) * kCell;
    out << "<text x=\"" << margin - 4 << "\" y=\"" << pos + kCell - 5 << "\" text-anchor=\"end\">"
        << xml_escape(m.metrics[i]) << "</text>\n";
    out << "<text transform=\"translate(" << pos + kCell - 5 << "," << margin - 4
        << ") rotate(-90)\">" << xml_escape(m.metrics[i]) << "</text>\n";
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const int x = margin + static_cast<int>(j) * kCell;
      const int y = margin + static_cast<int>(i) * kCell;
      std::string fill = "#eeeeee", stroke = "#ffffff";
      if (i == j) {
        fill = "#bbbbbb";
      } else {
        const SigCell& c = m.cell(i, j);
        if (c.significant) fill = win_fill;
        if (c.bonferroni_significant.value_or(false)) stroke = "#ff8c00";
      }
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

bool parse_flag(const std::string& text, const std::string& where) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw Error(ErrorCode::kParseError, where + ": expected 0 or 1, got '" + text + "'");
}

double parse_number(const std::string& text, const std::string& where) {
  double v = 0.0;
  if (!parse_double(text, v)) throw Error(ErrorCode::kParseError, where + ": bad number '" + text + "'");
  return v;
}

}  // namespace

void ReportTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw Error(ErrorCode::kInvalidArgument,
                "row has " + std::to_string(row.size()) + " fields, header has " + std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string csv_number(double value) { return format_fixed4(value); }

std::string write_csv(const ReportTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      append_field(out, fields[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

ReportTable parse_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false, at_start = true;
  std::size_t line_no = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      at_start = false;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      at_start = false;
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(fields));
      fields.clear();
      at_start = true;
      ++line_no;
    } else if (c != '\r') {
      field += c;
      at_start = false;
    }
  }
  if (quoted) throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line_no) + ": unterminated quote");
  if (!at_start) {
    fields.push_back(std::move(field));
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw Error(ErrorCode::kParseError, source + ": missing header");

  ReportTable table;
  table.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != table.header.size())
      throw Error(ErrorCode::kParseError, source + ":" + std::to_string(i + 1) + ": expected " +
                                              std::to_string(table.header.size()) + " fields, got " +
                                              std::to_string(lines[i].size()));
    table.rows.push_back(std::move(lines[i]));
  }
  return table;
}

ReportTable load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

SigFormat parse_sig_format(std::string_view name) {
  if (name == "csv") return SigFormat::kCsv;
  if (name == "textgrid") return SigFormat::kTextGrid;
  if (name == "svg") return SigFormat::kSvg;
  throw Error(ErrorCode::kUnsupportedFormat, "unsupported matrix format '" + std::string(name) + "'");
}

const char* sig_format_extension(SigFormat format) {
  switch (format) {
    case SigFormat::kCsv: return "csv";
    case SigFormat::kTextGrid: return "txt";
    case SigFormat::kSvg: return "svg";
  }
  return "csv";
}

std::string emit_sig_matrix(const SigMatrix& matrix, SigFormat format) {
  const std::size_t k = matrix.metrics.size();
  if (matrix.cells.size() != k * (k > 0 ? k - 1 : 0))
    throw Error(ErrorCode::kInvalidArgument, "significance matrix is incomplete");
  switch (format) {
    case SigFormat::kCsv: return write_sig_csv(matrix);
    case SigFormat::kTextGrid: return write_textgrid(matrix);
    case SigFormat::kSvg: return write_svg(matrix);
  }
  throw Error(ErrorCode::kUnsupportedFormat, "unsupported matrix format");
}

std::string emit_sig_matrix(const SigMatrix& matrix, std::string_view format) {
  return emit_sig_matrix(matrix, parse_sig_format(format));
}

SigMatrix parse_sig_matrix_csv(std::string_view text, const std::string& source) {
  const ReportTable t = parse_csv(text, source);
  if (t.header != kSigHeader) throw Error(ErrorCode::kParseError, source + ": not a significance matrix");
  SigMatrix m;
  if (t.rows.empty()) return m;

  std::map<std::string, std::size_t> index;
  auto metric_index = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, m.metrics.size());
    if (inserted) m.metrics.push_back(name);
    return it->second;
  };
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string where = source + ":" + std::to_string(i + 2);
    if (i == 0) {
      m.task = parse_task_label(r[0]);
      m.level = parse_level(r[1]);
      m.confidence = parse_number(r[4], where);
    } else if (r[0] != task_label(m.task) || r[1] != level_name(m.level)) {
      throw Error(ErrorCode::kParseError, where + ": mixed tasks or granularities");
    }
    SigCell c;
    c.row = metric_index(r[2]);
    c.col = metric_index(r[3]);
    if (!r[5].empty() || !r[6].empty())
      c.ci = CIResult{parse_number(r[5], where), parse_number(r[6], where), m.confidence};
    if (!r[7].empty()) c.p_value = parse_number(r[7], where);
    c.significant = parse_flag(r[8], where);
    if (!r[9].empty()) c.bonferroni_significant = parse_flag(r[9], where);
    m.cells.push_back(c);
  }
  const std::size_t k = m.metrics.size();
  if (m.cells.size() != k * (k - 1))
    throw Error(ErrorCode::kParseError, source + ": expected " + std::to_string(k * (k - 1)) + " ordered pairs");
  std::sort(m.cells.begin(), m.cells.end(),
            [](const SigCell& a, const SigCell& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  for (std::size_t i = 0, idx = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const SigCell& c = m.cells[idx++];
      if (c.row != i || c.col != j) throw Error(ErrorCode::kParseError, source + ": duplicate or diagonal cell");
    }
  return m;
}

}  // namespace lcmeval

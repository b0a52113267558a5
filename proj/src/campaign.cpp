// src/campaign.cpp
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

#include "lcmeval/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lcmeval/error.hpp"

namespace lcmeval {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  for (auto& item : split(value, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

// Iterates lines, stripping a trailing CR, and reports 1-based numbers.
template <typename F>
void for_each_line(std::string_view text, F&& fn) {
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    start = end + 1;
  }
}

double ratio_in_config(const CampaignConfig& config, double ratio, const std::string& source,
                       std::size_t line) {
  for (double r : config.length_ratios)
    if (r == ratio) return r;
  parse_fail(source, line, "length ratio " + format_shortest(ratio) + " is not listed in the campaign ratios");
}

bool has_system(const CampaignConfig& config, const std::string& system) {
  return std::find(config.systems.begin(), config.systems.end(), system) != config.systems.end();
}

std::string resolve_direction(const Campaign& campaign, const std::string& given, const std::string& seg_id,
                              const std::string& source, std::size_t line) {
  if (!given.empty()) {
    if (std::find(campaign.config.directions.begin(), campaign.config.directions.end(), given) ==
        campaign.config.directions.end())
      parse_fail(source, line, "direction '" + given + "' is not listed in the campaign");
    if (!campaign.find_segment(given, seg_id))
      throw Error(ErrorCode::kUnresolvedReference,
                  source + ":" + std::to_string(line) + ": unknown seg_id '" + seg_id + "' in " + given);
    return given;
  }
  std::string found;
  for (const auto& d : campaign.config.directions) {
    if (campaign.find_segment(d, seg_id)) {
      if (!found.empty())
        parse_fail(source, line, "seg_id '" + seg_id + "' exists in several directions; add a direction field");
      found = d;
    }
  }
  if (found.empty())
    throw Error(ErrorCode::kUnresolvedReference,
                source + ":" + std::to_string(line) + ": unknown seg_id '" + seg_id + "'");
  return found;
}

std::string json_string(const json& obj, const char* key, const std::string& source, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) parse_fail(source, line, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

std::optional<long long> json_count(const json& obj, const char* key, const std::string& source,
                                    std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    parse_fail(source, line, std::string("field '") + key + "' must be a nonnegative integer");
  return it->get<long long>();
}

json parse_json_line(std::string_view line, const std::string& source, std::size_t line_no) {
  try {
    json obj = json::parse(line);
    if (!obj.is_object()) parse_fail(source, line_no, "expected a JSON object");
    return obj;
  } catch (const json::parse_error& e) {
    parse_fail(source, line_no, e.what());
  }
}

bool parse_bool_field(std::string_view text, bool& out) {
  text = trim(text);
  if (text == "1" || text == "true") {
    out = true;
    return true;
  }
  if (text == "0" || text == "false") {
    out = false;
    return true;
  }
  return false;
}

void load_segments(Campaign& campaign, const fs::path& path) {
  const std::string source = path.filename().string();
  const std::string text = read_file(path);
  std::set<std::pair<std::string, std::string>> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    json obj = parse_json_line(line, source, line_no);
    SegmentRecord rec;
    rec.seg_id = json_string(obj, "seg_id", source, line_no);
    rec.direction = json_string(obj, "direction", source, line_no);
    rec.source_text = json_string(obj, "source_text", source, line_no);
    rec.reference_text = json_string(obj, "reference_text", source, line_no);
    rec.reference_length = json_count(obj, "reference_length", source, line_no);
    const auto& dirs = campaign.config.directions;
    if (std::find(dirs.begin(), dirs.end(), rec.direction) == dirs.end())
      parse_fail(source, line_no, "direction '" + rec.direction + "' is not listed in the campaign");
    if (rec.seg_id.empty()) parse_fail(source, line_no, "empty seg_id");
    if (rec.source_text.empty() || rec.reference_text.empty())
      parse_fail(source, line_no, "segment '" + rec.seg_id + "' has empty source or reference text");
    if (!seen.insert({rec.direction, rec.seg_id}).second)
      parse_fail(source, line_no, "duplicate seg_id '" + rec.seg_id + "' in " + rec.direction);
    campaign.segments.push_back(std::move(rec));
  });
  campaign.reindex();
}

void load_hypotheses(Campaign& campaign, const fs::path& path) {
  const std::string source = path.filename().string();
  const std::string text = read_file(path);
  std::set<std::tuple<std::string, double, std::string, std::string>> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    json obj = parse_json_line(line, source, line_no);
    HypothesisRecord rec;
    rec.system_id = json_string(obj, "system_id", source, line_no);
    rec.seg_id = json_string(obj, "seg_id", source, line_no);
    rec.text = json_string(obj, "text", source, line_no);
    auto ratio = obj.find("length_ratio");
    if (ratio == obj.end() || !ratio->is_number()) parse_fail(source, line_no, "missing numeric field 'length_ratio'");
    rec.length_ratio = ratio_in_config(campaign.config, ratio->get<double>(), source, line_no);
    std::string direction;
    if (auto d = obj.find("direction"); d != obj.end()) direction = json_string(obj, "direction", source, line_no);
    if (!has_system(campaign.config, rec.system_id))
      throw Error(ErrorCode::kUnresolvedReference,
                  source + ":" + std::to_string(line_no) + ": unknown system '" + rec.system_id + "'");
    rec.direction = resolve_direction(campaign, direction, rec.seg_id, source, line_no);
    rec.length = json_count(obj, "length", source, line_no);
    if (!seen.insert({rec.direction, rec.length_ratio, rec.system_id, rec.seg_id}).second)
      parse_fail(source, line_no, "duplicate hypothesis for system '" + rec.system_id + "' segment '" +
                                      rec.seg_id + "' ratio " + format_shortest(rec.length_ratio));
    campaign.hypotheses.push_back(std::move(rec));
  });
}

constexpr std::string_view kRatingsHeader = "annotator,seg_id,system,ratio,score,duration_s,is_trap";

void load_ratings(Campaign& campaign, const fs::path& path) {
  const std::string source = path.filename().string();
  const std::string text = read_file(path);
  bool header_seen = false, with_direction = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!header_seen) {
      const auto header = trim(line);
      if (header == kRatingsHeader) {
        with_direction = false;
      } else if (header == std::string(kRatingsHeader) + ",direction") {
        with_direction = true;
      } else {
        parse_fail(source, line_no, "expected header '" + std::string(kRatingsHeader) + "'");
      }
      header_seen = true;
      return;
    }
    if (trim(line).empty()) return;
    auto fields = split(line, ',');
    const std::size_t expected = with_direction ? 8 : 7;
    if (fields.size() != expected)
      parse_fail(source, line_no, "expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    for (auto& f : fields) f = std::string(trim(f));
    RatingRecord rec;
    rec.annotator_id = fields[0];
    rec.seg_id = fields[1];
    rec.system_id = fields[2];
    double ratio = 0;
    if (!parse_double(fields[3], ratio)) parse_fail(source, line_no, "bad ratio '" + fields[3] + "'");
    rec.length_ratio = ratio_in_config(campaign.config, ratio, source, line_no);
    long long score = 0;
    if (!parse_int64(fields[4], score) || score < 0 || score > 100)
      parse_fail(source, line_no, "score must be an integer in [0, 100], got '" + fields[4] + "'");
    rec.raw_score = static_cast<int>(score);
    if (!parse_double(fields[5], rec.duration_s) || !std::isfinite(rec.duration_s) || rec.duration_s < 0)
      parse_fail(source, line_no, "bad duration '" + fields[5] + "'");
    if (!parse_bool_field(fields[6], rec.is_trap)) parse_fail(source, line_no, "bad is_trap '" + fields[6] + "'");
    if (rec.annotator_id.empty()) parse_fail(source, line_no, "empty annotator id");
    if (!rec.is_trap && !has_system(campaign.config, rec.system_id))
      throw Error(ErrorCode::kUnresolvedReference,
                  source + ":" + std::to_string(line_no) + ": unknown system '" + rec.system_id + "'");
    rec.direction = resolve_direction(campaign, with_direction ? fields[7] : std::string(), rec.seg_id, source, line_no);
    campaign.ratings.push_back(std::move(rec));
  });
  if (!header_seen) parse_fail(source, 1, "missing header");
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorCode::kMissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<Task> CampaignConfig::tasks() const {
  std::vector<Task> out;
  for (const auto& d : directions)
    for (double r : length_ratios) out.push_back({d, r});
  return out;
}

fs::path CampaignConfig::resolve(const std::string& relative) const {
  fs::path p(relative);
  return p.is_absolute() ? p : base_dir / p;
}

void CampaignConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (directions.empty()) fail("no directions configured");
  if (std::set<std::string>(directions.begin(), directions.end()).size() != directions.size())
    fail("direction tags must be unique");
  if (length_ratios.empty()) fail("no length ratios configured");
  for (double r : length_ratios)
    if (!(r > 0.0 && r <= 1.0)) fail("length ratio " + format_shortest(r) + " outside (0, 1]");
  if (std::set<double>(length_ratios.begin(), length_ratios.end()).size() != length_ratios.size())
    fail("length ratios must be unique");
  if (systems.empty()) fail("no systems configured");
  if (std::set<std::string>(systems.begin(), systems.end()).size() != systems.size())
    fail("system ids must be unique");
  if (annotators_per_task < 1) fail("annotators_per_task must be >= 1");
  if (traps_per_annotator < 0) fail("traps_per_annotator must be >= 0");
}

CampaignConfig parse_config(std::string_view text, const fs::path& base_dir, const std::string& source) {
  CampaignConfig config;
  config.base_dir = base_dir;
  std::set<std::string> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(source, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key != "scores" && !seen.insert(key).second) parse_fail(source, line_no, "duplicate key '" + key + "'");
    if (key == "directions") {
      config.directions = split_list(value);
    } else if (key == "ratios") {
      config.length_ratios.clear();
      for (const auto& item : split_list(value)) {
        double r = 0;
        if (!parse_double(item, r)) parse_fail(source, line_no, "bad ratio '" + item + "'");
        config.length_ratios.push_back(r);
      }
    } else if (key == "systems") {
      config.systems = split_list(value);
    } else if (key == "annotators_per_task" || key == "traps_per_annotator") {
      long long n = 0;
      if (!parse_int64(value, n) || n < 0 || n > 1000000) parse_fail(source, line_no, "bad integer for " + key);
      (key == "annotators_per_task" ? config.annotators_per_task : config.traps_per_annotator) = static_cast<int>(n);
    } else if (key == "length_unit") {
      try {
        config.length_unit = parse_length_unit(value);
      } catch (const Error&) {
        parse_fail(source, line_no, "unknown length_unit '" + value + "'");
      }
    } else if (key == "seed") {
      unsigned long long s = 0;
      if (!parse_uint64(value, s)) parse_fail(source, line_no, "seed must be an unsigned 64-bit integer");
      config.seed = s;
    } else if (key == "segments") {
      config.segments_path = value;
    } else if (key == "hypotheses") {
      config.hypotheses_path = value;
    } else if (key == "ratings") {
      config.ratings_path = value;
    } else if (key == "scores") {
      // direction:ratio:path; the path itself may contain ':'.
      auto first = value.find(':');
      auto second = first == std::string::npos ? std::string::npos : value.find(':', first + 1);
      if (second == std::string::npos) parse_fail(source, line_no, "scores entry must be direction:ratio:path");
      ScoreFileRef ref;
      ref.task.direction = std::string(trim(std::string_view(value).substr(0, first)));
      if (!parse_double(std::string_view(value).substr(first + 1, second - first - 1), ref.task.ratio))
        parse_fail(source, line_no, "bad ratio in scores entry");
      ref.path = std::string(trim(std::string_view(value).substr(second + 1)));
      config.score_files.push_back(std::move(ref));
    } else {
      parse_fail(source, line_no, "unknown key '" + key + "'");
    }
  });
  for (const char* required : {"directions", "ratios", "systems", "annotators_per_task", "length_unit", "seed",
                               "segments", "hypotheses", "ratings"}) {
    if (!seen.count(required)) throw Error(ErrorCode::kParseError, source + ": missing key '" + required + "'");
  }
  try {
    config.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, source + ": " + e.what());
  }
  for (const auto& ref : config.score_files) {
    const auto& dirs = config.directions;
    if (std::find(dirs.begin(), dirs.end(), ref.task.direction) == dirs.end() ||
        std::find(config.length_ratios.begin(), config.length_ratios.end(), ref.task.ratio) ==
            config.length_ratios.end())
      throw Error(ErrorCode::kParseError, source + ": scores entry for unknown task " + task_label(ref.task));
  }
  return config;
}

CampaignConfig load_config(const fs::path& path) {
  const std::string text = read_file(path);
  return parse_config(text, path.parent_path(), path.filename().string());
}

std::string serialize_config(const CampaignConfig& c) {
  auto join = [](const auto& items, auto&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += fmt(items[i]);
    }
    return out;
  };
  auto id = [](const std::string& s) { return s; };
  std::string out;
  out += "directions = " + join(c.directions, id) + "\n";
  out += "ratios = " + join(c.length_ratios, [](double r) { return format_shortest(r); }) + "\n";
  out += "systems = " + join(c.systems, id) + "\n";
  out += "annotators_per_task = " + std::to_string(c.annotators_per_task) + "\n";
  out += "traps_per_annotator = " + std::to_string(c.traps_per_annotator) + "\n";
  out += std::string("length_unit = ") + length_unit_name(c.length_unit) + "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  out += "segments = " + c.segments_path + "\n";
  out += "hypotheses = " + c.hypotheses_path + "\n";
  out += "ratings = " + c.ratings_path + "\n";
  for (const auto& ref : c.score_files)
    out += "scores = " + ref.task.direction + ":" + format_shortest(ref.task.ratio) + ":" + ref.path + "\n";
  return out;
}

bool same_settings(const CampaignConfig& a, const CampaignConfig& b) {
  return a.directions == b.directions && a.length_ratios == b.length_ratios && a.systems == b.systems &&
         a.annotators_per_task == b.annotators_per_task && a.traps_per_annotator == b.traps_per_annotator &&
         a.length_unit == b.length_unit && a.seed == b.seed;
}

void Campaign::reindex() {
  segment_index_.clear();
  hypothesis_index_.clear();
  for (std::size_t i = 0; i < segments.size(); ++i)
    segment_index_[{segments[i].direction, segments[i].seg_id}] = i;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const auto& h = hypotheses[i];
    hypothesis_index_[{h.direction, h.length_ratio, h.system_id, h.seg_id}] = i;
  }
}

std::vector<std::string> Campaign::segment_ids(const std::string& direction) const {
  std::vector<std::string> ids;
  for (const auto& [key, index] : segment_index_)
    if (key.first == direction) ids.push_back(key.second);
  return ids;  // map order is already lexicographic
}

std::vector<const SegmentRecord*> Campaign::segments_of(const std::string& direction) const {
  std::vector<const SegmentRecord*> out;
  for (const auto& [key, index] : segment_index_)
    if (key.first == direction) out.push_back(&segments[index]);
  return out;
}

const SegmentRecord* Campaign::find_segment(const std::string& direction, const std::string& seg_id) const {
  auto it = segment_index_.find({direction, seg_id});
  return it == segment_index_.end() ? nullptr : &segments[it->second];
}

const SegmentRecord& Campaign::segment(const std::string& direction, const std::string& seg_id) const {
  const auto* s = find_segment(direction, seg_id);
  if (!s) throw Error(ErrorCode::kUnresolvedReference, "unknown seg_id '" + seg_id + "' in " + direction);
  return *s;
}

const HypothesisRecord* Campaign::find_hypothesis(const Task& task, const std::string& system,
                                                  const std::string& seg_id) const {
  auto it = hypothesis_index_.find({task.direction, task.ratio, system, seg_id});
  return it == hypothesis_index_.end() ? nullptr : &hypotheses[it->second];
}

std::vector<RatingRecord> Campaign::ratings_for(const Task& task) const {
  std::vector<RatingRecord> out;
  for (const auto& r : ratings)
    if (r.task() == task) out.push_back(r);
  return out;
}

bool Campaign::equivalent(const Campaign& other) const {
  return same_settings(config, other.config) && segments == other.segments && hypotheses == other.hypotheses &&
         ratings == other.ratings && external_scores == other.external_scores;
}

Campaign load_campaign(const fs::path& config_path) {
  Campaign campaign;
  campaign.config = load_config(config_path);
  const auto& cfg = campaign.config;
  load_segments(campaign, cfg.resolve(cfg.segments_path));
  load_hypotheses(campaign, cfg.resolve(cfg.hypotheses_path));
  load_ratings(campaign, cfg.resolve(cfg.ratings_path));
  campaign.reindex();
  for (const auto& ref : cfg.score_files) {
    auto tables = load_external_scores(cfg.resolve(ref.path), ref.task, campaign.segment_ids(ref.task.direction),
                                       cfg.systems);
    auto& slot = campaign.external_scores[ref.task];
    for (auto& t : tables) {
      for (const auto& existing : slot)
        if (existing.metric_id == t.metric_id && existing.variant_id == t.variant_id)
          throw Error(ErrorCode::kDuplicateCell, "metric " + t.name() + " appears in two score files for " +
                                                     task_label(ref.task));
      slot.push_back(std::move(t));
    }
  }
  for (auto& [task, tables] : campaign.external_scores)
    std::sort(tables.begin(), tables.end(), [](const ScoreTable& a, const ScoreTable& b) {
      return std::tie(a.metric_id, a.variant_id) < std::tie(b.metric_id, b.variant_id);
    });
  return campaign;
}

fs::path write_campaign(const Campaign& campaign, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());

  CampaignConfig config = campaign.config;
  config.base_dir = dir;
  config.segments_path = "segments.jsonl";
  config.hypotheses_path = "hypotheses.jsonl";
  config.ratings_path = "ratings.csv";
  config.score_files.clear();

  std::string seg_out;
  for (const auto& s : campaign.segments) {
    ordered_json obj;
    obj["seg_id"] = s.seg_id;
    obj["direction"] = s.direction;
    obj["source_text"] = s.source_text;
    obj["reference_text"] = s.reference_text;
    if (s.reference_length) obj["reference_length"] = *s.reference_length;
    seg_out += obj.dump() + "\n";
  }
  write_file(dir / config.segments_path, seg_out);

  std::string hyp_out;
  for (const auto& h : campaign.hypotheses) {
    ordered_json obj;
    obj["system_id"] = h.system_id;
    obj["seg_id"] = h.seg_id;
    obj["direction"] = h.direction;
    obj["length_ratio"] = h.length_ratio;
    obj["text"] = h.text;
    if (h.length) obj["length"] = *h.length;
    hyp_out += obj.dump() + "\n";
  }
  write_file(dir / config.hypotheses_path, hyp_out);

  std::string rating_out = std::string(kRatingsHeader) + ",direction\n";
  for (const auto& r : campaign.ratings) {
    rating_out += r.annotator_id + "," + r.seg_id + "," + r.system_id + "," + format_shortest(r.length_ratio) + "," +
                  std::to_string(r.raw_score) + "," + format_shortest(r.duration_s) + "," + (r.is_trap ? "1" : "0") +
                  "," + r.direction + "\n";
  }
  write_file(dir / config.ratings_path, rating_out);

  for (const auto& [task, tables] : campaign.external_scores) {
    ScoreFileRef ref{task, "scores_" + task_label(task) + ".tsv"};
    write_file(dir / ref.path, serialize_score_tables(tables));
    config.score_files.push_back(ref);
  }
  const fs::path conf = dir / "campaign.conf";
  write_file(conf, serialize_config(config));
  return conf;
}

constexpr std::string_view kScoresHeader = "metric\tvariant\tsystem\tseg_id\tscore";

std::vector<ScoreTable> parse_external_scores(std::string_view text, const Task& task,
                                              const std::vector<std::string>& segment_ids,
                                              const std::vector<std::string>& systems,
                                              const std::string& source) {
  std::map<std::string, std::size_t> seg_pos, sys_pos;
  for (std::size_t i = 0; i < systems.size(); ++i) sys_pos[systems[i]] = i;
  std::vector<std::string> sorted_segments = segment_ids;
  std::sort(sorted_segments.begin(), sorted_segments.end());
  for (std::size_t i = 0; i < sorted_segments.size(); ++i) seg_pos[sorted_segments[i]] = i;

  std::map<std::pair<std::string, std::string>, ScoreTable> tables;
  bool header_seen = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!header_seen) {
      if (line != kScoresHeader) parse_fail(source, line_no, "expected header 'metric<TAB>variant<TAB>system<TAB>seg_id<TAB>score'");
      header_seen = true;
      return;
    }
    if (line.empty()) return;
    auto fields = split(line, '\t');
    if (fields.size() != 5) parse_fail(source, line_no, "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    const auto& metric = fields[0];
    const auto& variant = fields[1];
    if (metric.empty()) parse_fail(source, line_no, "empty metric name");
    auto sys = sys_pos.find(fields[2]);
    if (sys == sys_pos.end())
      throw Error(ErrorCode::kUnresolvedReference, source + ":" + std::to_string(line_no) + ": unknown system '" + fields[2] + "'");
    auto seg = seg_pos.find(fields[3]);
    if (seg == seg_pos.end())
      throw Error(ErrorCode::kUnknownSegment, source + ":" + std::to_string(line_no) + ": unknown seg_id '" + fields[3] + "'");
    double score = 0;
    if (!parse_double(fields[4], score)) parse_fail(source, line_no, "bad score '" + fields[4] + "'");
    if (!std::isfinite(score))
      throw Error(ErrorCode::kNonFiniteScore, source + ":" + std::to_string(line_no) + ": score '" + fields[4] + "'");
    auto [it, inserted] = tables.try_emplace({metric, variant});
    if (inserted) it->second = ScoreTable(metric, variant, task, systems, sorted_segments);
    double& cell = it->second.at(sys->second, seg->second);
    if (!std::isnan(cell))
      throw Error(ErrorCode::kDuplicateCell, source + ":" + std::to_string(line_no) + ": " + metric + "/" + variant +
                                                 " already has a score for (" + fields[2] + ", " + fields[3] + ")");
    cell = score;
  });
  if (!header_seen) parse_fail(source, 1, "missing header");
  std::vector<ScoreTable> out;
  for (auto& [key, table] : tables) {
    try {
      table.require_dense();
    } catch (const Error& e) {
      throw Error(ErrorCode::kIncompleteTable, source + ": " + e.what());
    }
    out.push_back(std::move(table));
  }
  return out;
}

std::vector<ScoreTable> load_external_scores(const fs::path& path, const Task& task,
                                             const std::vector<std::string>& segment_ids,
                                             const std::vector<std::string>& systems) {
  return parse_external_scores(read_file(path), task, segment_ids, systems, path.filename().string());
}

std::string serialize_score_tables(const std::vector<ScoreTable>& tables) {
  std::string out = std::string(kScoresHeader) + "\n";
  for (const auto& t : tables) {
    if (t.level != TableLevel::kSegment)
      throw Error(ErrorCode::kSystemOnlyTable, "system-only table " + t.name() + " has no segment rows");
    for (std::size_t s = 0; s < t.systems.size(); ++s)
      for (std::size_t g = 0; g < t.segments.size(); ++g)
        out += t.metric_id + "\t" + t.variant_id + "\t" + t.systems[s] + "\t" + t.segments[g] + "\t" +
               format_shortest(t.at(s, g)) + "\n";
  }
  return out;
}

long long expected_rating_count(const std::vector<long long>& segments_per_direction, long long systems,
                                long long ratios, long long annotators) {
  long long segments = 0;
  for (long long n : segments_per_direction) segments += n;
  return segments * systems * ratios * annotators;
}

ValidationReport validate_campaign(const Campaign& campaign) {
  const auto& cfg = campaign.config;
  ValidationReport report;
  std::vector<long long> per_direction;
  for (const auto& d : cfg.directions) per_direction.push_back(static_cast<long long>(campaign.segment_ids(d).size()));
  report.expected_rating_count = expected_rating_count(per_direction, static_cast<long long>(cfg.systems.size()),
                                                       static_cast<long long>(cfg.length_ratios.size()),
                                                       cfg.annotators_per_task);

  // (task, seg, system) -> annotator -> count
  std::map<std::tuple<Task, std::string, std::string>, std::map<std::string, int>> cells;
  std::map<Task, std::set<std::string>> annotators;
  std::map<Task, long long> trap_counts;
  for (const auto& r : campaign.ratings) {
    if (r.is_trap) {
      ++trap_counts[r.task()];
      continue;
    }
    ++report.found_rating_count;
    ++cells[{r.task(), r.seg_id, r.system_id}][r.annotator_id];
    annotators[r.task()].insert(r.annotator_id);
  }

  for (const auto& task : cfg.tasks()) {
    for (const auto& seg : campaign.segment_ids(task.direction)) {
      for (const auto& sys : cfg.systems) {
        auto it = cells.find({task, seg, sys});
        const int distinct = it == cells.end() ? 0 : static_cast<int>(it->second.size());
        if (distinct < cfg.annotators_per_task)
          report.missing_cells.push_back({task, seg, sys, cfg.annotators_per_task - distinct});
        if (it != cells.end())
          for (const auto& [annotator, count] : it->second)
            if (count > 1) report.duplicate_cells.push_back({annotator, task, seg, sys, count});
        if (!campaign.find_hypothesis(task, sys, seg))
          report.warnings.push_back("no hypothesis for system '" + sys + "' segment '" + seg + "' in " + task_label(task));
      }
    }
    const auto n_annotators = annotators[task].size();
    if (n_annotators != 0 && n_annotators != static_cast<std::size_t>(cfg.annotators_per_task))
      report.warnings.push_back(task_label(task) + " has " + std::to_string(n_annotators) + " annotators, expected " +
                                std::to_string(cfg.annotators_per_task));
    const long long scheduled = static_cast<long long>(cfg.traps_per_annotator) * cfg.annotators_per_task;
    if (trap_counts[task] != scheduled)
      report.warnings.push_back(task_label(task) + " has " + std::to_string(trap_counts[task]) +
                                " trap ratings, scheduled " + std::to_string(scheduled));
  }
  return report;
}

std::string format_validation_report(const ValidationReport& report) {
  std::ostringstream os;
  os << "expected_rating_count\t" << report.expected_rating_count << "\n";
  os << "found_rating_count\t" << report.found_rating_count << "\n";
  os << "missing_cells\t" << report.missing_cells.size() << "\n";
  os << "duplicate_cells\t" << report.duplicate_cells.size() << "\n";
  for (const auto& m : report.missing_cells)
    os << "missing\t" << task_label(m.task) << "\t" << m.seg_id << "\t" << m.system_id << "\t" << m.missing_slots << "\n";
  for (const auto& d : report.duplicate_cells)
    os << "duplicate\t" << d.annotator_id << "\t" << task_label(d.task) << "\t" << d.seg_id << "\t" << d.system_id
       << "\t" << d.count << "\n";
  for (const auto& w : report.warnings) os << "warning\t" << w << "\n";
  return os.str();
}

}  // namespace lcmeval

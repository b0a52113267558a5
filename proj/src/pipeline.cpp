// src/pipeline.cpp
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

#include "lcmeval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "lcmeval/error.hpp"
#include "lcmeval/rng.hpp"
#include "lcmeval/significance.hpp"

#ifndef LCMEVAL_VERSION
#define LCMEVAL_VERSION "0.0.0"
#endif

namespace lcmeval {

namespace {

const char* const kRougeNames[] = {"ROUGE1-P", "ROUGE1-R", "ROUGE1-F1", "ROUGE2-P", "ROUGE2-R",
                                   "ROUGE2-F1", "ROUGEL-P", "ROUGEL-R", "ROUGEL-F1"};

std::vector<std::string> task_header(const std::string& first, const std::vector<Task>& tasks) {
  std::vector<std::string> header{first};
  for (const auto& t : tasks) header.push_back(task_label(t));
  return header;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

bool wants(const PipelineOptions& o, Level level) { return !o.level || *o.level == level; }

ArtifactSet validate_files(const Campaign& c) {
  return {{"validation.txt", format_validation_report(validate_campaign(c))}};
}

ArtifactSet trap_files(const Campaign& c, const PipelineOptions& o) {
  return {{"traps.jsonl", serialize_traps(generate_campaign_traps(c, o.length_unit.value_or(c.config.length_unit)))}};
}

ArtifactSet qc_files(const Campaign& c, const PipelineOptions& o) {
  ReportTable timing, traps, agree;
  timing.header = {"direction", "ratio", "all_ave", "cut_ave", "n_all", "n_cut"};
  traps.header = {"direction", "ratio", "zero", "low", "high", "total"};
  agree.header = {"direction", "ratio", "traps", "scale", "one_vs_rest_r", "krippendorff_alpha", "n_items"};
  for (const auto& t : c.config.tasks()) {
    const auto ratings = c.ratings_for(t);
    const TimingReport tr = timing_report(ratings, o.timing_cutoff);
    timing.add_row({t.direction, csv_number(t.ratio), csv_number(tr.all_ave), tr.cut_ave ? csv_number(*tr.cut_ave) : "",
                    std::to_string(tr.n_all), std::to_string(tr.n_cut)});

    std::vector<RatingRecord> trap_ratings;
    for (const auto& r : ratings)
      if (r.is_trap) trap_ratings.push_back(r);
    const TrapBuckets b = trap_report(trap_ratings);
    traps.add_row({t.direction, csv_number(t.ratio), std::to_string(b.zero), std::to_string(b.low),
                   std::to_string(b.high), std::to_string(b.total())});

    for (bool with : {true, false}) {
      const AgreementResult a = agreement(ratings, with, o.agreement_scale);
      agree.add_row({t.direction, csv_number(t.ratio), with ? "with" : "without",
                     o.agreement_scale == RatingScale::kRaw ? "raw" : "z", csv_number(a.one_vs_rest_r),
                     csv_number(a.krippendorff_alpha), std::to_string(a.n_items)});
    }
  }
  return {{"qc_timing.csv", write_csv(timing)}, {"qc_traps.csv", write_csv(traps)}, {"agreement.csv", write_csv(agree)}};
}

ArtifactSet normalize_files(const Campaign& c, const std::vector<NormalizedRating>& normalized,
                            const HumanSegmentScores& human) {
  ReportTable z, h;
  z.header = {"annotator", "direction", "ratio", "seg_id", "system", "raw_score", "z", "is_trap"};
  for (const auto& n : normalized) {
    const RatingRecord& r = n.rating;
    z.add_row({r.annotator_id, r.direction, csv_number(r.length_ratio), r.seg_id, r.system_id,
               std::to_string(r.raw_score), csv_number(n.z), r.is_trap ? "1" : "0"});
  }
  h.header = {"direction", "ratio", "system", "seg_id", "score", "n_ratings"};
  for (const auto& t : c.config.tasks()) {
    for (const auto& sys : c.config.systems) {
      for (const auto& seg : c.segment_ids(t.direction)) {
        const HumanSegmentScores::Key key{t, sys, seg};
        auto it = human.scores.find(key);
        if (it == human.scores.end()) continue;
        h.add_row({t.direction, csv_number(t.ratio), sys, seg, csv_number(it->second),
                   std::to_string(human.rating_counts.at(key))});
      }
    }
  }
  return {{"normalized_ratings.csv", write_csv(z)}, {"human_scores.csv", write_csv(h)}};
}

ArtifactSet score_files(const Campaign& c, const std::map<Task, NativeScores>& native) {
  ArtifactSet out;
  ReportTable corpus;
  corpus.header = {"direction", "ratio", "system", "bleu", "bleu_star", "brevity_penalty"};
  for (const auto& t : c.config.tasks()) {
    const NativeScores& n = native.at(t);
    std::vector<ScoreTable> tables = n.rouge;
    tables.push_back(n.length_deviation);
    out["scores_" + task_label(t) + ".tsv"] = serialize_score_tables(tables);
    for (std::size_t s = 0; s < n.bleu.systems.size(); ++s) {
      BleuStats total(4);
      for (std::size_t g = 0; g < n.bleu.segments.size(); ++g) total += n.bleu.at(s, g);
      const BleuScore score = finalize_bleu(total);
      corpus.add_row({t.direction, csv_number(t.ratio), n.bleu.systems[s], csv_number(score.bleu),
                      csv_number(score.bleu_star), csv_number(score.brevity_penalty)});
    }
  }
  out["corpus_scores.csv"] = write_csv(corpus);
  return out;
}

double metric_system_correlation(const MetricSeries& m, const TaskContext& ctx, unsigned threads) {
  return m.segment_level ? system_level_correlation(m.tables.at(ctx.task), ctx, threads)
                         : system_level_correlation(m.corpus.at(ctx.task), ctx, threads);
}

ArtifactSet correlate_files(const Evaluation& ev, const PipelineOptions& o) {
  ArtifactSet out;
  if (wants(o, Level::kSystem)) {
    ReportTable t;
    t.header = task_header("metric", ev.tasks);
    t.header.push_back("average");
    for (const auto& m : ev.metrics) {
      std::vector<double> r;
      for (const auto& ctx : ev.contexts) r.push_back(metric_system_correlation(m, ctx, o.threads));
      std::vector<std::string> row{m.name};
      for (double v : r) row.push_back(csv_number(v));
      row.push_back(csv_number(mean(r)));
      t.add_row(std::move(row));
    }
    out["correlations_system.csv"] = write_csv(t);
  }
  if (wants(o, Level::kSegment)) {
    ReportTable t;
    t.header = task_header("metric", ev.tasks);
    t.header.push_back("average");
    for (const auto& m : ev.metrics) {
      if (!m.segment_level) continue;
      std::vector<double> r;
      for (const auto& ctx : ev.contexts) r.push_back(segment_level_correlation(m.tables.at(ctx.task), ctx));
      std::vector<std::string> row{m.name};
      for (double v : r) row.push_back(csv_number(v));
      row.push_back(csv_number(mean(r)));
      t.add_row(std::move(row));
    }
    out["correlations_segment.csv"] = write_csv(t);
  }
  ReportTable v;
  v.header = {"metric", "variant", "level"};
  for (const auto& t : ev.tasks) v.header.push_back(task_label(t));
  v.header.push_back("average");
  v.header.push_back("chosen");
  for (const auto& sel : ev.selections) {
    for (const auto& cand : sel.candidates) {
      std::vector<std::string> row{sel.metric_id, cand.variant_id, level_name(sel.level)};
      for (double r : cand.per_task) row.push_back(csv_number(r));
      row.push_back(csv_number(cand.average));
      row.push_back(cand.variant_id == sel.chosen_variant ? "1" : "0");
      v.add_row(std::move(row));
    }
  }
  out["variant_selection.csv"] = write_csv(v);
  return out;
}

void add_matrix_files(ArtifactSet& out, const std::string& stem, const SigMatrix& m, const PipelineOptions& o) {
  for (SigFormat f : o.sig_formats) out[stem + "." + sig_format_extension(f)] = emit_sig_matrix(m, f);
}

ArtifactSet significance_files(const Evaluation& ev, const PipelineOptions& o) {
  ArtifactSet out;
  for (const auto& ctx : ev.contexts) {
    const std::string label = task_label(ctx.task);
    if (wants(o, Level::kSystem)) {
      std::vector<std::string> names;
      std::vector<std::vector<double>> vectors;
      for (const auto& m : ev.metrics) {
        names.push_back(m.name);
        vectors.push_back(m.segment_level ? extend_with_hybrids(m.tables.at(ctx.task), ctx.selectors, o.threads).scores
                                          : extend_with_hybrids(m.corpus.at(ctx.task), ctx.selectors, o.threads).scores);
      }
      add_matrix_files(out, "sig_system_" + label,
                       system_sig_matrix(ctx.task, names, vectors, ctx.human_system.scores, o.confidence), o);
    }
    if (wants(o, Level::kSegment)) {
      std::vector<ScoreTable> tables;
      for (const auto& m : ev.metrics) {
        if (!m.segment_level) continue;
        ScoreTable t = m.tables.at(ctx.task);
        t.metric_id = m.name;
        t.variant_id.clear();
        tables.push_back(std::move(t));
      }
      add_matrix_files(out, "sig_segment_" + label,
                       segment_sig_matrix(tables, ctx.human, o.permutations,
                                          derive_seed(ev.seed, "perm/" + label, 0), o.alpha, o.threads),
                       o);
    }
  }
  return out;
}

ArtifactSet syscompare_files(const Evaluation& ev, const PipelineOptions& o) {
  ReportTable eval;
  eval.header = {"metric", "system"};
  for (const auto& t : ev.tasks) {
    eval.header.push_back(task_label(t));
    eval.header.push_back(task_label(t) + "_p");
  }
  for (const auto& m : ev.metrics) {
    if (!m.segment_level) continue;
    const auto& systems = m.tables.at(ev.tasks.front()).systems;
    for (std::size_t s = 0; s < systems.size(); ++s) {
      std::vector<std::string> row{m.name, systems[s]};
      for (const auto& t : ev.tasks) {
        const ScoreTable& table = m.tables.at(t);
        table.require_dense();
        const std::size_t n = table.segments.size();
        std::span<const double> mine(table.values.data() + s * n, n);
        double p = -1.0;
        for (std::size_t other = 0; other < systems.size(); ++other) {
          if (other == s) continue;
          std::span<const double> theirs(table.values.data() + other * n, n);
          const std::uint64_t seed =
              derive_seed(ev.seed, "bootstrap/" + task_label(t) + "/" + m.name + "/" + systems[s] + "/" + systems[other], 0);
          p = std::max(p, paired_bootstrap(mine, theirs, o.bootstrap, seed, o.threads));
        }
        row.push_back(csv_number(mean(std::vector<double>(mine.begin(), mine.end()))) + (p >= 0.0 ? dagger(p) : ""));
        row.push_back(p >= 0.0 ? csv_number(p) : "");
      }
      eval.add_row(std::move(row));
    }
  }

  ReportTable dev;
  dev.header = task_header("system", ev.tasks);
  const NativeScores& first = ev.native.at(ev.tasks.front());
  for (std::size_t s = 0; s < first.length_deviation.systems.size(); ++s) {
    std::vector<std::string> row{first.length_deviation.systems[s]};
    for (const auto& t : ev.tasks) {
      const NativeScores& n = ev.native.at(t);
      const std::size_t segs = n.length_deviation.segments.size();
      std::span<const LengthRecord> records(n.length_records.data() + s * segs, segs);
      row.push_back(csv_number(length_deviation(records)));
    }
    dev.add_row(std::move(row));
  }
  return {{"system_eval.csv", write_csv(eval)}, {"length_deviation.csv", write_csv(dev)}};
}

void merge(ArtifactSet& into, ArtifactSet from) {
  for (auto& [name, content] : from) into[name] = std::move(content);
}

}  // namespace

NativeScores score_command(const Campaign& campaign, const Task& task, LengthUnit unit) {
  const auto& systems = campaign.config.systems;
  const auto segs = campaign.segment_ids(task.direction);
  if (segs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no segments for direction " + task.direction);
  const TokenScheme scheme = scheme_for_direction(task.direction);

  NativeScores out;
  out.task = task;
  for (const char* name : kRougeNames) out.rouge.emplace_back(name, "", task, systems, segs);
  out.length_deviation = ScoreTable("LengthDeviation", "", task, systems, segs);
  out.bleu.metric_id = "BLEU";
  out.bleu.task = task;
  out.bleu.metric = CorpusMetric::kBleu;
  out.bleu.systems = systems;
  out.bleu.segments = segs;

  std::vector<TokenSeq> refs;
  std::vector<long long> expected;
  for (const auto& seg : segs) {
    const SegmentRecord& r = campaign.segment(task.direction, seg);
    refs.push_back(tokenize(r.reference_text, scheme));
    expected.push_back(expected_length(task.ratio, measure_length(r.reference_text, unit, scheme, r.reference_length)));
  }
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (std::size_t g = 0; g < segs.size(); ++g) {
      const HypothesisRecord* hyp = campaign.find_hypothesis(task, systems[s], segs[g]);
      if (!hyp)
        throw Error(ErrorCode::kIncompleteTable, "no hypothesis from system '" + systems[s] + "' for segment '" +
                                                     segs[g] + "' in " + task_label(task));
      const TokenSeq h = tokenize(hyp->text, scheme);
      const RougeScore r[] = {rouge_n(h, refs[g], 1), rouge_n(h, refs[g], 2), rouge_l(h, refs[g])};
      for (int k = 0; k < 3; ++k) {
        out.rouge[3 * k].at(s, g) = r[k].precision;
        out.rouge[3 * k + 1].at(s, g) = r[k].recall;
        out.rouge[3 * k + 2].at(s, g) = r[k].f1;
      }
      out.bleu.stats.push_back(bleu_stats(h, refs[g], 4));
      const LengthRecord rec{measure_length(hyp->text, unit, scheme, hyp->length), expected[g]};
      out.length_records.push_back(rec);
      out.length_deviation.at(s, g) =
          static_cast<double>(std::llabs(rec.output_len - rec.expect_len)) / static_cast<double>(rec.expect_len);
    }
  }
  out.bleu_star = out.bleu;
  out.bleu_star.metric_id = "BLEU*";
  out.bleu_star.metric = CorpusMetric::kBleuStar;
  return out;
}

Evaluation build_evaluation(const Campaign& c, const PipelineOptions& o) {
  Evaluation ev;
  ev.seed = o.seed.value_or(c.config.seed);
  ev.unit = o.length_unit.value_or(c.config.length_unit);
  ev.tasks = c.config.tasks();
  for (const auto& t : ev.tasks) ev.native.emplace(t, score_command(c, t, ev.unit));
  ev.normalized = znormalize(c.ratings, o.include_traps);
  ev.human = aggregate_segment_human(ev.normalized, c.config.annotators_per_task);
  for (const auto& t : ev.tasks) {
    ev.contexts.push_back(make_task_context(human_table(ev.human, t, c.config.systems, c.segment_ids(t.direction)),
                                            o.hybrids, derive_seed(ev.seed, "hybrid/" + task_label(t), 0), o.threads));
  }

  for (std::size_t i = 0; i < std::size(kRougeNames); ++i) {
    MetricSeries m;
    m.name = kRougeNames[i];
    for (const auto& t : ev.tasks) m.tables.emplace(t, ev.native.at(t).rouge[i]);
    ev.metrics.push_back(std::move(m));
  }
  MetricSeries bleu_star;
  bleu_star.name = "BLEU*";
  bleu_star.segment_level = false;
  for (const auto& t : ev.tasks) bleu_star.corpus.emplace(t, ev.native.at(t).bleu_star);
  ev.metrics.push_back(std::move(bleu_star));

  std::map<std::string, std::vector<ScoreTable>> by_metric;
  for (const auto& t : ev.tasks) {
    auto it = c.external_scores.find(t);
    if (it == c.external_scores.end()) continue;
    for (const auto& table : it->second) by_metric[table.metric_id].push_back(table);
  }
  for (const auto& [metric, tables] : by_metric) {
    std::set<std::string> variants;
    for (const auto& t : tables) variants.insert(t.variant_id);
    std::string chosen = *variants.begin();
    if (variants.size() > 1) {
      ev.selections.push_back(select_best_variant(tables, ev.contexts, Level::kSystem, o.threads));
      chosen = ev.selections.back().chosen_variant;
    }
    MetricSeries m;
    m.name = metric;
    for (const auto& task : ev.tasks) {
      auto it = std::find_if(tables.begin(), tables.end(),
                             [&](const ScoreTable& t) { return t.task == task && t.variant_id == chosen; });
      if (it == tables.end())
        throw Error(ErrorCode::kIncompleteTable, "metric " + metric + " has no scores for " + task_label(task));
      m.tables.emplace(task, *it);
    }
    ev.metrics.push_back(std::move(m));
  }
  return ev;
}

Stage parse_stage(std::string_view name) {
  static const std::pair<const char*, Stage> kStages[] = {
      {"validate", Stage::kValidate},     {"traps", Stage::kTraps},     {"qc", Stage::kQc},
      {"normalize", Stage::kNormalize},   {"score", Stage::kScore},     {"correlate", Stage::kCorrelate},
      {"significance", Stage::kSignificance}, {"syscompare", Stage::kSysCompare}, {"run", Stage::kRun}};
  for (const auto& [n, s] : kStages)
    if (name == n) return s;
  throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(name) + "'");
}

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::kValidate: return "validate";
    case Stage::kTraps: return "traps";
    case Stage::kQc: return "qc";
    case Stage::kNormalize: return "normalize";
    case Stage::kScore: return "score";
    case Stage::kCorrelate: return "correlate";
    case Stage::kSignificance: return "significance";
    case Stage::kSysCompare: return "syscompare";
    case Stage::kRun: return "run";
  }
  return "run";
}

ArtifactSet stage_artifacts(Stage stage, const Campaign& c, const PipelineOptions& o) {
  switch (stage) {
    case Stage::kValidate: return validate_files(c);
    case Stage::kTraps: return trap_files(c, o);
    case Stage::kQc: return qc_files(c, o);
    case Stage::kNormalize: {
      const auto normalized = znormalize(c.ratings, o.include_traps);
      return normalize_files(c, normalized, aggregate_segment_human(normalized, c.config.annotators_per_task));
    }
    case Stage::kScore: {
      std::map<Task, NativeScores> native;
      const LengthUnit unit = o.length_unit.value_or(c.config.length_unit);
      for (const auto& t : c.config.tasks()) native.emplace(t, score_command(c, t, unit));
      return score_files(c, native);
    }
    case Stage::kCorrelate: return correlate_files(build_evaluation(c, o), o);
    case Stage::kSignificance: return significance_files(build_evaluation(c, o), o);
    case Stage::kSysCompare: return syscompare_files(build_evaluation(c, o), o);
    case Stage::kRun: break;
  }

  const ValidationReport report = validate_campaign(c);
  if (!report.ok())
    throw Error(ErrorCode::kIncompleteTable, "campaign failed validation:\n" + format_validation_report(report));
  const Evaluation ev = build_evaluation(c, o);
  ArtifactSet all = {{"validation.txt", format_validation_report(report)}};
  merge(all, trap_files(c, o));
  merge(all, qc_files(c, o));
  merge(all, normalize_files(c, ev.normalized, ev.human));
  merge(all, score_files(c, ev.native));
  merge(all, correlate_files(ev, o));
  merge(all, significance_files(ev, o));
  merge(all, syscompare_files(ev, o));
  return all;
}

std::string content_digest(std::string_view content) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize_manifest(const PipelineArtifacts& a) {
  std::string out = "# version\t" + a.version + "\n# seed\t" + std::to_string(a.seed) + "\n# config\t" +
                    a.config_digest + "\nfile\tdigest\n";
  for (const auto& e : a.files) out += e.file + "\t" + e.digest + "\n";
  return out;
}

PipelineArtifacts parse_manifest(std::string_view text, const std::string& source) {
  PipelineArtifacts a;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto tab = line.find('\t');
    const std::string where = source + ":" + std::to_string(line_no);
    if (tab == std::string_view::npos) throw Error(ErrorCode::kParseError, where + ": expected two tab-separated fields");
    const std::string key(line.substr(0, tab)), value(line.substr(tab + 1));
    if (key == "# version") {
      a.version = value;
    } else if (key == "# seed") {
      unsigned long long s = 0;
      if (!parse_uint64(value, s)) throw Error(ErrorCode::kParseError, where + ": bad seed");
      a.seed = s;
    } else if (key == "# config") {
      a.config_digest = value;
    } else if (key == "file" && value == "digest" && !header_seen) {
      header_seen = true;
    } else if (header_seen) {
      a.files.push_back({key, value});
    } else {
      throw Error(ErrorCode::kParseError, where + ": unexpected line before header");
    }
  }
  if (!header_seen) throw Error(ErrorCode::kParseError, source + ": missing header");
  return a;
}

PipelineArtifacts write_artifacts(const ArtifactSet& files, const Campaign& campaign, const PipelineOptions& options,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string() + ": " + ec.message());
  PipelineArtifacts a;
  a.version = library_version();
  a.seed = options.seed.value_or(campaign.config.seed);
  a.config_digest = content_digest(serialize_config(campaign.config));
  for (const auto& [name, content] : files) {
    write_file(out_dir / name, content);
    a.files.push_back({name, content_digest(content)});
  }
  write_file(out_dir / "manifest.tsv", serialize_manifest(a));
  return a;
}

PipelineArtifacts run_pipeline(const Campaign& campaign, const std::filesystem::path& out_dir,
                               const PipelineOptions& options) {
  return write_artifacts(stage_artifacts(Stage::kRun, campaign, options), campaign, options, out_dir);
}

const char* library_version() { return LCMEVAL_VERSION; }

}  // namespace lcmeval

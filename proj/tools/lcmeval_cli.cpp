// tools/lcmeval_cli.cpp
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

// Command-line front end over the C API.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "lcmeval/lcmeval.h"

namespace {

struct Flags {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> hybrids, permutations, bootstrap;
  std::optional<double> alpha, timing_cutoff;
  bool include_traps = false;
  std::string length_unit, level, format, agreement_scale;
  unsigned threads = 1;
};

int fail(lcm_status status) {
  std::fprintf(stderr, "lcmeval: %s\n", lcm_last_error());
  return lcm_exit_code(status);
}

class Campaign {
 public:
  ~Campaign() { lcm_campaign_free(handle_); }
  lcm_status load(const std::string& path) { return lcm_campaign_load(path.c_str(), &handle_); }
  const lcm_campaign* get() const { return handle_; }

 private:
  lcm_campaign* handle_ = nullptr;
};

class Options {
 public:
  Options() { lcm_options_new(&handle_); }
  ~Options() { lcm_options_free(handle_); }
  lcm_options* get() const { return handle_; }

 private:
  lcm_options* handle_ = nullptr;
};

lcm_status apply(const Flags& f, lcm_options* o) {
  lcm_status s = LCM_OK;
  auto step = [&](lcm_status next) {
    if (s == LCM_OK) s = next;
  };
  if (f.seed) step(lcm_options_set_seed(o, *f.seed));
  if (f.hybrids) step(lcm_options_set_hybrids(o, *f.hybrids));
  if (f.permutations) step(lcm_options_set_permutations(o, *f.permutations));
  if (f.bootstrap) step(lcm_options_set_bootstrap(o, *f.bootstrap));
  if (f.alpha) step(lcm_options_set_alpha(o, *f.alpha));
  if (f.timing_cutoff) step(lcm_options_set_timing_cutoff(o, *f.timing_cutoff));
  step(lcm_options_set_include_traps(o, f.include_traps ? 1 : 0));
  if (!f.length_unit.empty()) step(lcm_options_set_length_unit(o, f.length_unit.c_str()));
  if (!f.level.empty()) step(lcm_options_set_level(o, f.level.c_str()));
  if (!f.format.empty()) step(lcm_options_set_sig_format(o, f.format.c_str()));
  if (!f.agreement_scale.empty()) step(lcm_options_set_agreement_scale(o, f.agreement_scale.c_str()));
  step(lcm_options_set_threads(o, f.threads));
  return s;
}

int run_stage(const std::string& stage, const Flags& f) {
  Campaign campaign;
  if (auto s = campaign.load(f.config); s != LCM_OK) return fail(s);
  Options options;
  if (auto s = apply(f, options.get()); s != LCM_OK) return fail(s);
  if (auto s = lcm_run_stage(campaign.get(), stage.c_str(), options.get(), f.out_dir.c_str()); s != LCM_OK)
    return fail(s);
  std::printf("%s: wrote %s\n", stage.c_str(), f.out_dir.c_str());
  return 0;
}

int run_validate(const Flags& f) {
  Campaign campaign;
  if (auto s = campaign.load(f.config); s != LCM_OK) return fail(s);
  int ok = 0;
  char* report = nullptr;
  if (auto s = lcm_campaign_validate(campaign.get(), &ok, nullptr, nullptr, &report); s != LCM_OK) return fail(s);
  std::fputs(report, stdout);
  lcm_string_free(report);
  if (!f.out_dir.empty()) {
    if (auto s = lcm_run_stage(campaign.get(), "validate", nullptr, f.out_dir.c_str()); s != LCM_OK) return fail(s);
  }
  return ok ? 0 : 1;
}

int run_ingest(const Flags& f) {
  Campaign campaign;
  if (auto s = campaign.load(f.config); s != LCM_OK) return fail(s);
  char* path = nullptr;
  if (auto s = lcm_campaign_ingest(campaign.get(), f.out_dir.c_str(), &path); s != LCM_OK) return fail(s);
  std::printf("ingest: wrote %s\n", path);
  lcm_string_free(path);
  return 0;
}

void add_resampling_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "Master seed (overrides the campaign seed)");
  cmd->add_option("--hybrids", f.hybrids, "Hybrid systems per task (default 1000)");
  cmd->add_option("--permutations", f.permutations, "PERM-BOTH replicates (default 1000)");
  cmd->add_option("--bootstrap", f.bootstrap, "Paired bootstrap resamples (default 1000)");
  cmd->add_option("--alpha", f.alpha, "Significance level (default 0.05)");
  cmd->add_option("--level", f.level, "Restrict to one granularity")->check(CLI::IsMember({"system", "segment"}));
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void add_rating_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--timing-cutoff", f.timing_cutoff, "Cut.Ave. threshold in seconds (default 600)");
  cmd->add_flag("--include-traps", f.include_traps, "Use trap ratings in z-normalization statistics");
  cmd->add_option("--agreement-scale", f.agreement_scale, "Agreement on raw or z scores")
      ->check(CLI::IsMember({"raw", "z"}));
}

void add_length_flag(CLI::App* cmd, Flags& f) {
  cmd->add_option("--length-unit", f.length_unit, "characters, whitespace-tokens or provided-counts");
}

CLI::App* campaign_command(CLI::App& app, const std::string& name, const std::string& help, Flags& f,
                           bool needs_out) {
  CLI::App* cmd = app.add_subcommand(name, help);
  cmd->add_option("config", f.config, "Campaign config file")->required();
  auto* out = cmd->add_option("--out-dir,--out", f.out_dir, "Output directory");
  if (needs_out) out->required();
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-evaluation of automatic metrics for length-controllable translation"};
  app.set_version_flag("--version", std::string(lcm_version()));
  app.require_subcommand(1);

  Flags f;
  std::string report_input, report_output;

  campaign_command(app, "validate", "Check rating completeness and references", f, false);
  add_length_flag(campaign_command(app, "traps", "Generate truncated-reference trap items", f, true), f);
  add_rating_flags(campaign_command(app, "qc", "Annotation time, trap buckets and agreement", f, true), f);
  add_rating_flags(campaign_command(app, "normalize", "Per-annotator z-scores and human segment scores", f, true),
                   f);
  add_length_flag(campaign_command(app, "score", "Native lexical metrics", f, true), f);
  campaign_command(app, "ingest", "Write a canonical copy of the campaign", f, true);
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"correlate", "System and segment correlations, variant selection"},
           {"significance", "Pairwise significance matrices"},
           {"syscompare", "System comparison with paired bootstrap, length deviation"},
           {"run", "Full pipeline"}}) {
    CLI::App* cmd = campaign_command(app, name, help, f, true);
    add_resampling_flags(cmd, f);
    add_rating_flags(cmd, f);
    add_length_flag(cmd, f);
    if (name == "significance" || name == "run")
      cmd->add_option("--format", f.format, "Matrix format")->check(CLI::IsMember({"csv", "textgrid", "svg"}));
  }
  CLI::App* report = app.add_subcommand("report", "Render a significance matrix CSV");
  report->add_option("input", report_input, "Significance matrix CSV")->required();
  report->add_option("--format", f.format, "csv, textgrid or svg")->required();
  report->add_option("--out", report_output, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "validate") return run_validate(f);
  if (name == "ingest") return run_ingest(f);
  if (name == "report") {
    if (auto s = lcm_emit_sig_matrix(report_input.c_str(), f.format.c_str(), report_output.c_str()); s != LCM_OK)
      return fail(s);
    return 0;
  }
  return run_stage(name, f);
}

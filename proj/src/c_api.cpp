// src/c_api.cpp
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

#include "lcmeval/lcmeval.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "lcmeval/correlation.hpp"
#include "lcmeval/error.hpp"
#include "lcmeval/lexical.hpp"
#include "lcmeval/pipeline.hpp"
#include "lcmeval/ratings.hpp"
#include "lcmeval/report.hpp"
#include "lcmeval/significance.hpp"

struct lcm_campaign {
  lcmeval::Campaign campaign;
};

struct lcm_options {
  lcmeval::PipelineOptions options;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
lcm_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return LCM_OK;
  } catch (const lcmeval::Error& e) {
    g_last_error = e.what();
    return static_cast<lcm_status>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = std::string("IoError: ") + e.what();
    return LCM_IO_ERROR;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LCM_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LCM_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw lcmeval::Error(lcmeval::ErrorCode::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* lcm_version(void) { return lcmeval::library_version(); }

const char* lcm_last_error(void) { return g_last_error.c_str(); }

const char* lcm_status_name(lcm_status status) {
  if (status == LCM_OK) return "Ok";
  if (status == LCM_INTERNAL) return "Internal";
  if (status < LCM_INVALID_ARGUMENT || status > LCM_UNSUPPORTED_FORMAT) return "Unknown";
  return lcmeval::error_code_name(static_cast<lcmeval::ErrorCode>(status));
}

int lcm_exit_code(lcm_status status) {
  if (status == LCM_OK) return 0;
  if (status < LCM_INVALID_ARGUMENT || status > LCM_UNSUPPORTED_FORMAT) return 1;
  return static_cast<int>(lcmeval::error_category(static_cast<lcmeval::ErrorCode>(status)));
}

void lcm_string_free(char* text) { std::free(text); }

lcm_status lcm_campaign_load(const char* config_path, lcm_campaign** out) {
  return guarded([&] {
    require(config_path && out, "null argument");
    *out = nullptr;
    auto handle = std::make_unique<lcm_campaign>();
    handle->campaign = lcmeval::load_campaign(config_path);
    *out = handle.release();
  });
}

void lcm_campaign_free(lcm_campaign* campaign) { delete campaign; }

lcm_status lcm_campaign_validate(const lcm_campaign* campaign, int* ok, long long* expected_ratings,
                                 long long* found_ratings, char** report) {
  return guarded([&] {
    require(campaign != nullptr, "null campaign");
    const auto r = lcmeval::validate_campaign(campaign->campaign);
    if (ok) *ok = r.ok() ? 1 : 0;
    if (expected_ratings) *expected_ratings = r.expected_rating_count;
    if (found_ratings) *found_ratings = r.found_rating_count;
    if (report) *report = copy_string(lcmeval::format_validation_report(r));
  });
}

lcm_status lcm_campaign_trap_count(const lcm_campaign* campaign, long long* count) {
  return guarded([&] {
    require(campaign && count, "null argument");
    *count = lcmeval::trap_annotation_count(campaign->campaign.config);
  });
}

lcm_status lcm_campaign_ingest(const lcm_campaign* campaign, const char* out_dir, char** config_path) {
  return guarded([&] {
    require(campaign && out_dir, "null argument");
    const auto path = lcmeval::write_campaign(campaign->campaign, out_dir);
    if (config_path) *config_path = copy_string(path.string());
  });
}

lcm_status lcm_options_new(lcm_options** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new lcm_options();
  });
}

void lcm_options_free(lcm_options* options) { delete options; }

lcm_status lcm_options_set_seed(lcm_options* o, uint64_t seed) {
  return guarded([&] {
    require(o != nullptr, "null options");
    o->options.seed = seed;
  });
}

lcm_status lcm_options_set_hybrids(lcm_options* o, size_t count) {
  return guarded([&] {
    require(o != nullptr, "null options");
    o->options.hybrids = count;
  });
}

lcm_status lcm_options_set_permutations(lcm_options* o, size_t count) {
  return guarded([&] {
    require(o != nullptr, "null options");
    require(count > 0, "permutation count must be positive");
    o->options.permutations = count;
  });
}

lcm_status lcm_options_set_bootstrap(lcm_options* o, size_t count) {
  return guarded([&] {
    require(o != nullptr, "null options");
    require(count > 0, "bootstrap count must be positive");
    o->options.bootstrap = count;
  });
}

lcm_status lcm_options_set_alpha(lcm_options* o, double alpha) {
  return guarded([&] {
    require(o != nullptr, "null options");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    o->options.alpha = alpha;
    o->options.confidence = 1.0 - alpha;
  });
}

lcm_status lcm_options_set_timing_cutoff(lcm_options* o, double seconds) {
  return guarded([&] {
    require(o != nullptr, "null options");
    require(seconds > 0.0, "timing cutoff must be positive");
    o->options.timing_cutoff = seconds;
  });
}

lcm_status lcm_options_set_include_traps(lcm_options* o, int include) {
  return guarded([&] {
    require(o != nullptr, "null options");
    o->options.include_traps = include != 0;
  });
}

lcm_status lcm_options_set_agreement_scale(lcm_options* o, const char* scale) {
  return guarded([&] {
    require(o && scale, "null argument");
    const std::string s = scale;
    require(s == "raw" || s == "z", "agreement scale must be raw or z");
    o->options.agreement_scale = s == "raw" ? lcmeval::RatingScale::kRaw : lcmeval::RatingScale::kZ;
  });
}

lcm_status lcm_options_set_length_unit(lcm_options* o, const char* unit) {
  return guarded([&] {
    require(o && unit, "null argument");
    o->options.length_unit = lcmeval::parse_length_unit(unit);
  });
}

lcm_status lcm_options_set_level(lcm_options* o, const char* level) {
  return guarded([&] {
    require(o && level, "null argument");
    o->options.level = lcmeval::parse_level(level);
  });
}

lcm_status lcm_options_set_sig_format(lcm_options* o, const char* format) {
  return guarded([&] {
    require(o && format, "null argument");
    o->options.sig_formats = {lcmeval::parse_sig_format(format)};
  });
}

lcm_status lcm_options_set_threads(lcm_options* o, unsigned threads) {
  return guarded([&] {
    require(o != nullptr, "null options");
    require(threads > 0, "thread count must be positive");
    o->options.threads = threads;
  });
}

lcm_status lcm_run_stage(const lcm_campaign* campaign, const char* stage, const lcm_options* options,
                         const char* out_dir) {
  return guarded([&] {
    require(campaign && stage && out_dir, "null argument");
    const lcmeval::PipelineOptions opts = options ? options->options : lcmeval::PipelineOptions{};
    const auto files = lcmeval::stage_artifacts(lcmeval::parse_stage(stage), campaign->campaign, opts);
    lcmeval::write_artifacts(files, campaign->campaign, opts, out_dir);
  });
}

lcm_status lcm_emit_sig_matrix(const char* csv_path, const char* format, const char* out_path) {
  return guarded([&] {
    require(csv_path && format && out_path, "null argument");
    const auto matrix = lcmeval::parse_sig_matrix_csv(lcmeval::read_file(csv_path), csv_path);
    lcmeval::write_file(out_path, lcmeval::emit_sig_matrix(matrix, std::string_view(format)));
  });
}

lcm_status lcm_pearson(const double* x, const double* y, size_t n, double* r) {
  return guarded([&] {
    require(x && y && r, "null argument");
    *r = lcmeval::pearson({x, n}, {y, n}).value;
  });
}

lcm_status lcm_kendall_tau_b(const double* x, const double* y, size_t n, double* tau) {
  return guarded([&] {
    require(x && y && tau, "null argument");
    *tau = lcmeval::kendall_tau_b({x, n}, {y, n}).value;
  });
}

lcm_status lcm_zou_ci(double r12, double r13, double r23, size_t n, double level, double* lower, double* upper) {
  return guarded([&] {
    require(lower && upper, "null argument");
    const auto ci = lcmeval::zou_ci(r12, r13, r23, n, level);
    *lower = ci.lower;
    *upper = ci.upper;
  });
}

lcm_status lcm_paired_bootstrap(const double* seg_a, size_t n_a, const double* seg_b, size_t n_b, size_t iterations,
                                uint64_t seed, unsigned threads, double* p) {
  return guarded([&] {
    require(seg_a && seg_b && p, "null argument");
    *p = lcmeval::paired_bootstrap({seg_a, n_a}, {seg_b, n_b}, iterations, seed, threads == 0 ? 1 : threads);
  });
}

lcm_status lcm_length_deviation(const long long* output_len, const long long* expect_len, size_t n,
                                double* deviation) {
  return guarded([&] {
    require(deviation && (n == 0 || (output_len && expect_len)), "null argument");
    std::vector<lcmeval::LengthRecord> records(n);
    for (size_t i = 0; i < n; ++i) records[i] = {output_len[i], expect_len[i]};
    *deviation = lcmeval::length_deviation(records);
  });
}

lcm_status lcm_corpus_bleu(const char* const* hypotheses, const char* const* references, size_t n, const char* scheme,
                           double* bleu, double* bleu_star) {
  return guarded([&] {
    require(scheme && bleu && bleu_star && (n == 0 || (hypotheses && references)), "null argument");
    const std::string s = scheme;
    require(s == "character" || s == "whitespace", "scheme must be character or whitespace");
    const auto ts = s == "character" ? lcmeval::TokenScheme::kCharacter : lcmeval::TokenScheme::kWhitespace;
    std::vector<lcmeval::TokenSeq> hyps, refs;
    for (size_t i = 0; i < n; ++i) {
      require(hypotheses[i] && references[i], "null sentence");
      hyps.push_back(lcmeval::tokenize(hypotheses[i], ts));
      refs.push_back(lcmeval::tokenize(references[i], ts));
    }
    const auto score = lcmeval::corpus_bleu(hyps, refs, 4);
    *bleu = score.bleu;
    *bleu_star = score.bleu_star;
  });
}

}  // extern "C"

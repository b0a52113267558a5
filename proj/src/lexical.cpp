// src/lexical.cpp
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

#include "lcmeval/lexical.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "lcmeval/error.hpp"

namespace lcmeval {

namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

using NgramCounts = std::unordered_map<std::string, int>;

// Length-prefixed keys so that no token content can collide across n-grams.
NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return counts;
  const std::size_t nn = static_cast<std::size_t>(n);
  std::string key;
  for (std::size_t i = 0; i + nn <= tokens.size(); ++i) {
    key.clear();
    for (std::size_t j = i; j < i + nn; ++j) {
      key += std::to_string(tokens[j].size());
      key += ':';
      key += tokens[j];
    }
    ++counts[key];
  }
  return counts;
}

long long clipped_overlap(const NgramCounts& hyp, const NgramCounts& ref) {
  long long overlap = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

long long ngram_total(std::size_t len, int n) {
  return len >= static_cast<std::size_t>(n) ? static_cast<long long>(len) - n + 1 : 0;
}

}  // namespace

std::string nfc(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kIoError, "ICU NFC normalizer unavailable");
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kIoError, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<TokenSpan> token_spans(std::string_view normalized, TokenScheme scheme) {
  std::vector<TokenSpan> spans;
  const auto* s = reinterpret_cast<const uint8_t*>(normalized.data());
  const auto length = static_cast<int32_t>(normalized.size());
  int32_t i = 0;
  bool in_token = false;
  std::size_t token_begin = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (scheme == TokenScheme::kCharacter) {
      if (!space) spans.push_back({static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
      continue;
    }
    if (space) {
      if (in_token) spans.push_back({token_begin, static_cast<std::size_t>(start)});
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      token_begin = static_cast<std::size_t>(start);
    }
  }
  if (in_token) spans.push_back({token_begin, normalized.size()});
  return spans;
}

TokenSeq tokenize(std::string_view text, TokenScheme scheme) {
  const std::string normalized = nfc(text);
  TokenSeq seq;
  seq.scheme = scheme;
  for (const auto& span : token_spans(normalized, scheme)) {
    seq.tokens.emplace_back(normalized.substr(span.begin, span.end - span.begin));
  }
  return seq;
}

TokenScheme scheme_for_direction(std::string_view direction) {
  auto dash = direction.find('-');
  std::string target(dash == std::string_view::npos ? direction : direction.substr(dash + 1));
  std::transform(target.begin(), target.end(), target.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (target == "zh" || target == "ja") return TokenScheme::kCharacter;
  return TokenScheme::kWhitespace;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  if (other.matches.size() != matches.size())
    throw Error(ErrorCode::kInvalidArgument, "BLEU stats with different max order");
  for (std::size_t n = 0; n < matches.size(); ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

BleuStats bleu_stats(const TokenSeq& hyp, const TokenSeq& ref, int max_n) {
  if (max_n < 1) throw Error(ErrorCode::kInvalidArgument, "BLEU max order must be >= 1");
  BleuStats stats(max_n);
  stats.hyp_len = static_cast<long long>(hyp.size());
  stats.ref_len = static_cast<long long>(ref.size());
  for (int n = 1; n <= max_n; ++n) {
    const auto h = count_ngrams(hyp.tokens, n);
    const auto r = count_ngrams(ref.tokens, n);
    stats.matches[n - 1] = clipped_overlap(h, r);
    stats.totals[n - 1] = ngram_total(hyp.size(), n);
  }
  return stats;
}

BleuScore finalize_bleu(const BleuStats& stats) {
  if (stats.hyp_len <= 0)
    throw Error(ErrorCode::kZeroLengthHypothesisCorpus, "hypothesis corpus has no tokens");
  BleuScore score;
  const std::size_t orders = stats.matches.size();
  score.precisions.assign(orders, 0.0);
  score.brevity_penalty =
      stats.hyp_len < stats.ref_len
          ? std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len))
          : 1.0;

  const bool any_match =
      std::any_of(stats.matches.begin(), stats.matches.end(), [](long long m) { return m > 0; });
  if (!any_match) return score;

  double smooth = 1.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < orders; ++n) {
    double p;
    if (stats.matches[n] > 0) {
      p = static_cast<double>(stats.matches[n]) / static_cast<double>(stats.totals[n]);
    } else {
      smooth *= 2.0;
      p = 1.0 / (smooth * static_cast<double>(std::max<long long>(stats.totals[n], 1)));
    }
    score.precisions[n] = p;
    log_sum += std::log(p);
  }
  const double geometric = std::exp(log_sum / static_cast<double>(orders));
  score.bleu = score.brevity_penalty * geometric;
  score.bleu_star = geometric;
  return score;
}

BleuScore corpus_bleu(std::span<const TokenSeq> hypotheses,
                      std::span<const TokenSeq> references, int max_n) {
  if (hypotheses.empty()) throw Error(ErrorCode::kEmptyCorpus, "no hypotheses");
  if (hypotheses.size() != references.size())
    throw Error(ErrorCode::kLengthMismatch, "hypothesis and reference counts differ");
  BleuStats total(max_n);
  for (std::size_t i = 0; i < hypotheses.size(); ++i) total += bleu_stats(hypotheses[i], references[i], max_n);
  return finalize_bleu(total);
}

double bleu_star(const BleuScore& score) {
  if (!(score.brevity_penalty > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "brevity penalty must be positive");
  return score.bleu / score.brevity_penalty;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

RougeScore rouge_n(const TokenSeq& hyp, const TokenSeq& ref, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "ROUGE-N order must be >= 1");
  const auto h = count_ngrams(hyp.tokens, n);
  const auto r = count_ngrams(ref.tokens, n);
  const long long overlap = clipped_overlap(h, r);
  const long long hyp_total = ngram_total(hyp.size(), n);
  const long long ref_total = ngram_total(ref.size(), n);
  RougeScore s;
  s.precision = hyp_total > 0 ? static_cast<double>(overlap) / static_cast<double>(hyp_total) : 0.0;
  s.recall = ref_total > 0 ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(const TokenSeq& hyp, const TokenSeq& ref) {
  const auto lcs = static_cast<double>(lcs_length(hyp.tokens, ref.tokens));
  RougeScore s;
  s.precision = hyp.size() > 0 ? lcs / static_cast<double>(hyp.size()) : 0.0;
  s.recall = ref.size() > 0 ? lcs / static_cast<double>(ref.size()) : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

double length_deviation(std::span<const LengthRecord> records) {
  if (records.empty()) throw Error(ErrorCode::kEmptySet, "length deviation of an empty set");
  double sum = 0.0;
  for (const auto& r : records) {
    if (r.expect_len <= 0) throw Error(ErrorCode::kInvalidArgument, "expected length must be positive");
    if (r.output_len < 0) throw Error(ErrorCode::kInvalidArgument, "output length must be nonnegative");
    sum += static_cast<double>(std::llabs(r.output_len - r.expect_len)) / static_cast<double>(r.expect_len);
  }
  return sum / static_cast<double>(records.size());
}

long long expected_length(double ratio, long long reference_length) {
  // The epsilon absorbs representation error in products like 0.3 * 5.
  const double target = std::floor(ratio * static_cast<double>(reference_length) + 0.5 + 1e-9);
  return std::max<long long>(1, static_cast<long long>(target));
}

TokenScheme scheme_for_unit(LengthUnit unit, TokenScheme natural) {
  switch (unit) {
    case LengthUnit::kCharacters: return TokenScheme::kCharacter;
    case LengthUnit::kWhitespaceTokens: return TokenScheme::kWhitespace;
    case LengthUnit::kProvidedCounts: return natural;
  }
  return natural;
}

long long measure_length(std::string_view text, LengthUnit unit, TokenScheme natural,
                         std::optional<long long> provided) {
  if (unit == LengthUnit::kProvidedCounts) {
    if (!provided) throw Error(ErrorCode::kInvalidArgument, "length_unit is provided-counts but no length given");
    return *provided;
  }
  const std::string normalized = nfc(text);
  return static_cast<long long>(token_spans(normalized, scheme_for_unit(unit, natural)).size());
}

}  // namespace lcmeval

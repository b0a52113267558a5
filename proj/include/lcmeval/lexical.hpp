// include/lcmeval/lexical.hpp
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

// Lexical overlap metrics: tokenization, corpus BLEU / BLEU*, ROUGE-N,
// ROUGE-L and length deviation of length-controlled outputs.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcmeval/types.hpp"

namespace lcmeval {

enum class TokenScheme { kCharacter, kWhitespace };

struct TokenSeq {
  std::vector<std::string> tokens;
  TokenScheme scheme = TokenScheme::kWhitespace;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const TokenSeq&) const = default;
};

/// Byte range [begin, end) of one token inside the NFC-normalized text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Unicode NFC normalization of UTF-8 text. Invalid sequences become U+FFFD.
std::string nfc(std::string_view text);

/// Character scheme: one token per Unicode scalar value, whitespace dropped.
/// Whitespace scheme: maximal runs of non-whitespace. Both operate on the
/// NFC form of `text`.
TokenSeq tokenize(std::string_view text, TokenScheme scheme);

/// Token boundaries over `normalized`, which must already be NFC.
std::vector<TokenSpan> token_spans(std::string_view normalized, TokenScheme scheme);

/// Chinese/Japanese targets are scored on characters, everything else on
/// whitespace tokens. The target is the part of the tag after '-'.
TokenScheme scheme_for_direction(std::string_view direction);

/// Additive sufficient statistics for corpus BLEU. Summing the stats of any
/// set of segments and finalizing gives the corpus score of that set.
struct BleuStats {
  std::vector<long long> matches;  // clipped n-gram matches, order 1..max_n
  std::vector<long long> totals;   // hypothesis n-gram counts, order 1..max_n
  long long hyp_len = 0;
  long long ref_len = 0;

  explicit BleuStats(int max_n = 4)
      : matches(static_cast<std::size_t>(max_n), 0), totals(static_cast<std::size_t>(max_n), 0) {}

  BleuStats& operator+=(const BleuStats& other);
  bool operator==(const BleuStats&) const = default;
};

struct BleuScore {
  std::vector<double> precisions;  // after smoothing
  double brevity_penalty = 1.0;
  double bleu = 0.0;
  double bleu_star = 0.0;
};

BleuStats bleu_stats(const TokenSeq& hyp, const TokenSeq& ref, int max_n = 4);

/// Exponential smoothing: the k-th order with zero matches gets precision
/// 1 / (2^k * max(total, 1)). With no match at any order the score is 0.
BleuScore finalize_bleu(const BleuStats& stats);

BleuScore corpus_bleu(std::span<const TokenSeq> hypotheses,
                      std::span<const TokenSeq> references, int max_n = 4);

/// BLEU with the brevity penalty divided back out.
double bleu_star(const BleuScore& score);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Harmonic mean; 0 when both inputs are 0.
double f1_score(double precision, double recall);

/// Clipped n-gram overlap. Empty denominators give 0 for that side.
RougeScore rouge_n(const TokenSeq& hyp, const TokenSeq& ref, int n);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);
RougeScore rouge_l(const TokenSeq& hyp, const TokenSeq& ref);

struct LengthRecord {
  long long output_len = 0;
  long long expect_len = 1;
};

/// Mean of |output_len - expect_len| / expect_len.
double length_deviation(std::span<const LengthRecord> records);

/// round-half-up(ratio * reference_length), at least 1.
long long expected_length(double ratio, long long reference_length);

/// Length of `text` in the given unit. kProvidedCounts returns `provided`
/// and fails when it is absent.
long long measure_length(std::string_view text, LengthUnit unit, TokenScheme natural,
                         std::optional<long long> provided);

/// Scheme used to count length units for truncation and length targets.
TokenScheme scheme_for_unit(LengthUnit unit, TokenScheme natural);

}  // namespace lcmeval

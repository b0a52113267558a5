// tests/test_lexical.cpp
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lcmeval/error.hpp"
#include "lcmeval/lexical.hpp"
#include "oracles.hpp"

using namespace lcmeval;

namespace {

TokenSeq ws(const std::string& text) { return tokenize(text, TokenScheme::kWhitespace); }

TokenSeq seq(std::vector<std::string> tokens) {
  TokenSeq s;
  s.tokens = std::move(tokens);
  return s;
}

}  // namespace

TEST(Tokenize, CharacterSchemeSplitsCodePoints) {
  const auto t = tokenize("明天下雨", TokenScheme::kCharacter);
  EXPECT_EQ(t.tokens, (std::vector<std::string>{"明", "天", "下", "雨"}));
}

TEST(Tokenize, EmptyAndWhitespaceCollapse) {
  EXPECT_TRUE(tokenize("", TokenScheme::kCharacter).tokens.empty());
  EXPECT_TRUE(tokenize("", TokenScheme::kWhitespace).tokens.empty());
  EXPECT_EQ(ws("a  b").tokens, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ws("\ta\xE3\x80\x80" "b\n").tokens, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(tokenize("明 天", TokenScheme::kCharacter).tokens, (std::vector<std::string>{"明", "天"}));
}

TEST(Tokenize, NfcComposesBeforeSplitting) {
  const auto t = tokenize("e\xCC\x81" "a", TokenScheme::kCharacter);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.tokens[0], "\xC3\xA9");
  EXPECT_EQ(nfc("e\xCC\x81"), "\xC3\xA9");
}

TEST(Tokenize, DirectionPicksScheme) {
  EXPECT_EQ(scheme_for_direction("en-zh"), TokenScheme::kCharacter);
  EXPECT_EQ(scheme_for_direction("en-ja"), TokenScheme::kCharacter);
  EXPECT_EQ(scheme_for_direction("zh-en"), TokenScheme::kWhitespace);
}

TEST(Bleu, IdentityGivesOne) {
  std::vector<TokenSeq> h{ws("the cat sat on the mat"), ws("a b c d e")};
  const auto s = corpus_bleu(h, h);
  EXPECT_DOUBLE_EQ(s.bleu, 1.0);
  EXPECT_DOUBLE_EQ(s.brevity_penalty, 1.0);
  EXPECT_DOUBLE_EQ(s.bleu_star, 1.0);
}

TEST(Bleu, NoOverlapIsZero) {
  std::vector<TokenSeq> h{ws("x y z w")}, r{ws("a b c d")};
  const auto s = corpus_bleu(h, r);
  EXPECT_EQ(s.bleu, 0.0);
  EXPECT_EQ(s.bleu_star, 0.0);
}

TEST(Bleu, HandEnumeratedShortHypothesis) {
  // p1 = 3/3, p2 = 2/2, p3 = 1/1, no 4-grams -> smoothed to 1/2; bp = exp(1 - 4/3).
  std::vector<TokenSeq> h{ws("the cat sat")}, r{ws("the cat sat down")};
  const auto s = corpus_bleu(h, r);
  const double bp = std::exp(1.0 - 4.0 / 3.0);
  EXPECT_NEAR(s.brevity_penalty, bp, 1e-15);
  EXPECT_NEAR(s.bleu, bp * std::pow(0.5, 0.25), 1e-15);
  EXPECT_NEAR(s.bleu_star, std::pow(0.5, 0.25), 1e-15);
  EXPECT_NEAR(s.bleu, 0.6025, 5e-5);
}

TEST(Bleu, ErrorsOnEmptyInputs) {
  std::vector<TokenSeq> none;
  EXPECT_THROW(corpus_bleu(none, none), Error);
  std::vector<TokenSeq> empty{ws("")}, ref{ws("a")};
  try {
    corpus_bleu(empty, ref);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroLengthHypothesisCorpus);
  }
  std::vector<TokenSeq> two{ws("a"), ws("b")};
  EXPECT_THROW(corpus_bleu(two, ref), Error);
}

TEST(Bleu, StarFormula) {
  BleuScore s;
  s.bleu = 0.30;
  s.brevity_penalty = 1.0;
  EXPECT_DOUBLE_EQ(bleu_star(s), 0.30);
  s.bleu = 0.20;
  s.brevity_penalty = 0.5;
  EXPECT_DOUBLE_EQ(bleu_star(s), 0.40);
  s.bleu = 0.0;
  EXPECT_DOUBLE_EQ(bleu_star(s), 0.0);
}

TEST(Bleu, StatsAreAdditiveAndOrderFree) {
  std::mt19937_64 rng(3);
  std::vector<TokenSeq> h, r;
  BleuStats total(4);
  for (int i = 0; i < 30; ++i) {
    h.push_back(seq(oracle::random_tokens(rng, 12, 6)));
    r.push_back(seq(oracle::random_tokens(rng, 12, 6)));
    if (h.back().tokens.empty()) h.back().tokens.push_back("w0");
    total += bleu_stats(h.back(), r.back());
  }
  const auto direct = corpus_bleu(h, r);
  EXPECT_DOUBLE_EQ(finalize_bleu(total).bleu, direct.bleu);
  std::vector<std::size_t> perm(h.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<TokenSeq> hp, rp;
  for (auto i : perm) {
    hp.push_back(h[i]);
    rp.push_back(r[i]);
  }
  EXPECT_DOUBLE_EQ(corpus_bleu(hp, rp).bleu, direct.bleu);
}

TEST(Bleu, StatsMatchClippedEnumeration) {
  std::mt19937_64 rng(11);
  for (int c = 0; c < 300; ++c) {
    const auto h = oracle::random_tokens(rng, 15, 5), r = oracle::random_tokens(rng, 15, 5);
    const auto st = bleu_stats(seq(h), seq(r));
    for (int n = 1; n <= 4; ++n) {
      const auto o = oracle::clipped_ngrams(h, r, n);
      EXPECT_EQ(st.matches[n - 1], o.matches);
      EXPECT_EQ(st.totals[n - 1], o.hyp_total);
    }
    EXPECT_EQ(st.hyp_len, static_cast<long long>(h.size()));
    EXPECT_EQ(st.ref_len, static_cast<long long>(r.size()));
  }
}

TEST(Rouge, HandExamples) {
  const auto r1 = rouge_n(seq({"the", "cat"}), seq({"the", "cat", "sat"}), 1);
  EXPECT_DOUBLE_EQ(r1.precision, 1.0);
  EXPECT_DOUBLE_EQ(r1.recall, 2.0 / 3.0);
  EXPECT_NEAR(r1.f1, 0.8, 1e-15);
  const auto rl = rouge_l(seq({"a", "c"}), seq({"a", "b", "c"}));
  EXPECT_DOUBLE_EQ(rl.precision, 1.0);
  EXPECT_DOUBLE_EQ(rl.recall, 2.0 / 3.0);
  EXPECT_NEAR(rl.f1, 0.8, 1e-15);
}

TEST(Rouge, IdentityDisjointAndEmpty) {
  const auto a = ws("x y z x");
  for (int n : {1, 2}) {
    const auto s = rouge_n(a, a, n);
    EXPECT_EQ(s.precision, 1.0);
    EXPECT_EQ(s.recall, 1.0);
    EXPECT_EQ(s.f1, 1.0);
  }
  EXPECT_EQ(rouge_l(a, a).f1, 1.0);
  const auto d = rouge_n(ws("a b"), ws("c d"), 1);
  EXPECT_EQ(d.precision + d.recall + d.f1, 0.0);
  const auto e = rouge_l(ws(""), ws("a b"));
  EXPECT_EQ(e.precision + e.recall + e.f1, 0.0);
  const auto short_hyp = rouge_n(ws("a"), ws("a b"), 2);
  EXPECT_EQ(short_hyp.precision, 0.0);
  EXPECT_THROW(rouge_n(a, a, 0), Error);
}

TEST(Rouge, RandomPairsMatchOracles) {
  std::mt19937_64 rng(19);
  for (int c = 0; c < 1000; ++c) {
    const auto h = oracle::random_tokens(rng, 20, 4), r = oracle::random_tokens(rng, 20, 4);
    const std::size_t lcs = oracle::lcs(h, r);
    ASSERT_EQ(lcs_length(h, r), lcs);
    const auto rl = rouge_l(seq(h), seq(r));
    EXPECT_EQ(rl.precision, h.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(h.size()));
    EXPECT_EQ(rl.recall, r.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(r.size()));
    for (int n : {1, 2}) {
      const auto o = oracle::clipped_ngrams(h, r, n);
      const auto s = rouge_n(seq(h), seq(r), n);
      EXPECT_EQ(s.precision, o.hyp_total ? static_cast<double>(o.matches) / static_cast<double>(o.hyp_total) : 0.0);
      EXPECT_EQ(s.recall, o.ref_total ? static_cast<double>(o.matches) / static_cast<double>(o.ref_total) : 0.0);
      // Swapping hyp and ref exchanges precision and recall.
      const auto swapped = rouge_n(seq(r), seq(h), n);
      EXPECT_EQ(swapped.precision, s.recall);
      EXPECT_EQ(swapped.recall, s.precision);
      EXPECT_DOUBLE_EQ(swapped.f1, s.f1);
    }
  }
}

TEST(LengthDeviation, FormulaCases) {
  const LengthRecord perfect[] = {{10, 10}, {3, 3}};
  EXPECT_EQ(length_deviation(perfect), 0.0);
  const LengthRecord mixed[] = {{8, 10}, {12, 10}};
  EXPECT_DOUBLE_EQ(length_deviation(mixed), 0.2);
  const LengthRecord scaled[] = {{24, 30}, {36, 30}};
  EXPECT_DOUBLE_EQ(length_deviation(scaled), 0.2);
  EXPECT_THROW(length_deviation(std::span<const LengthRecord>{}), Error);
  const LengthRecord bad[] = {{1, 0}};
  EXPECT_THROW(length_deviation(bad), Error);
}

TEST(LengthDeviation, ExpectedLengthRoundsHalfUp) {
  EXPECT_EQ(expected_length(0.5, 5), 3);
  EXPECT_EQ(expected_length(0.8, 10), 8);
  EXPECT_EQ(expected_length(0.5, 7), 4);
  EXPECT_EQ(expected_length(0.8, 1), 1);
  EXPECT_EQ(expected_length(0.5, 0), 1);
}

TEST(LengthDeviation, MeasureLengthUnits) {
  EXPECT_EQ(measure_length("明天 下雨", LengthUnit::kCharacters, TokenScheme::kCharacter, std::nullopt), 4);
  EXPECT_EQ(measure_length("a bb  ccc", LengthUnit::kWhitespaceTokens, TokenScheme::kCharacter, std::nullopt), 3);
  EXPECT_EQ(measure_length("whatever", LengthUnit::kProvidedCounts, TokenScheme::kWhitespace, 17), 17);
  EXPECT_THROW(measure_length("x", LengthUnit::kProvidedCounts, TokenScheme::kWhitespace, std::nullopt), Error);
}

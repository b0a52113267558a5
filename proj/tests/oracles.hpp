// tests/oracles.hpp
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

// Slow, obviously-correct reference implementations used by the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Pairwise enumeration of concordant, discordant and tied pairs.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int dx = (x[i] > x[j]) - (x[i] < x[j]);
      const int dy = (y[i] > y[j]) - (y[i] < y[j]);
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++tie_x;
      } else if (dy == 0) {
        ++tie_y;
      } else if (dx == dy) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double a = static_cast<double>(concordant + discordant + tie_x);
  const double b = static_cast<double>(concordant + discordant + tie_y);
  return static_cast<double>(concordant - discordant) / std::sqrt(a * b);
}

/// Raw-sum textbook formula evaluated in long double.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const long double n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

/// Top-down memoized recursion over (i, j) suffixes.
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t v = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    memo[key] = v;
    return v;
  };
  return go(0, 0);
}

/// Occurrences of every hypothesis n-gram counted by scanning both sides.
struct ClippedCount {
  long long matches = 0;
  long long hyp_total = 0;
  long long ref_total = 0;
};

inline ClippedCount clipped_ngrams(const std::vector<std::string>& hyp, const std::vector<std::string>& ref, int n) {
  auto grams = [n](const std::vector<std::string>& s) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i + n <= s.size(); ++i) out.emplace_back(s.begin() + i, s.begin() + i + n);
    return out;
  };
  const auto h = grams(hyp), r = grams(ref);
  ClippedCount c;
  c.hyp_total = static_cast<long long>(h.size());
  c.ref_total = static_cast<long long>(r.size());
  std::vector<std::vector<std::string>> seen;
  for (const auto& g : h) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    const long long in_h = std::count(h.begin(), h.end(), g);
    const long long in_r = std::count(r.begin(), r.end(), g);
    c.matches += std::min(in_h, in_r);
  }
  return c;
}

/// Interval Krippendorff alpha through an explicit coincidence matrix.
/// units[u] holds the values given to unit u (missing ratings omitted).
inline double krippendorff_interval(const std::vector<std::vector<double>>& units) {
  std::vector<double> values;
  for (const auto& u : units)
    if (u.size() >= 2) values.insert(values.end(), u.begin(), u.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t v = values.size();
  auto idx = [&](double x) { return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), x) - values.begin()); };

  std::vector<long double> o(v * v, 0.0L);
  for (const auto& u : units) {
    const std::size_t m = u.size();
    if (m < 2) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) o[idx(u[i]) * v + idx(u[j])] += 1.0L / static_cast<long double>(m - 1);
  }
  std::vector<long double> marg(v, 0.0L);
  long double n = 0;
  for (std::size_t c = 0; c < v; ++c)
    for (std::size_t k = 0; k < v; ++k) marg[c] += o[c * v + k];
  for (auto m : marg) n += m;
  long double d_o = 0, d_e = 0;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) {
      const long double delta = (static_cast<long double>(values[c]) - values[k]) * (values[c] - values[k]);
      d_o += o[c * v + k] * delta;
      d_e += marg[c] * marg[k] * delta;
    }
  }
  d_o /= n;
  d_e /= n * (n - 1);
  return static_cast<double>(1.0L - d_o / d_e);
}

/// Draws n rows of a trivariate normal with unit variances and the given
/// correlations, via a Cholesky factor.
inline void trivariate_normal(std::mt19937_64& rng, double r12, double r13, double r23, std::size_t n,
                              std::vector<double>& x1, std::vector<double>& x2, std::vector<double>& x3) {
  const double l11 = 1.0;
  const double l21 = r12, l22 = std::sqrt(1.0 - r12 * r12);
  const double l31 = r13, l32 = (r23 - r13 * r12) / l22, l33 = std::sqrt(1.0 - l31 * l31 - l32 * l32);
  std::normal_distribution<double> z;
  x1.resize(n);
  x2.resize(n);
  x3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = z(rng), b = z(rng), c = z(rng);
    x1[i] = l11 * a;
    x2[i] = l21 * a + l22 * b;
    x3[i] = l31 * a + l32 * b + l33 * c;
  }
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t max_len, int vocab) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> tok(0, vocab - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = "w" + std::to_string(tok(rng));
  return out;
}

}  // namespace oracle

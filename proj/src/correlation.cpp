// src/correlation.cpp
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

#include "lcmeval/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lcmeval/error.hpp"

namespace lcmeval {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kLengthMismatch,
                "vectors of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  if (x.size() < 2) throw Error(ErrorCode::kSampleTooSmall, "correlation needs at least 2 points");
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

long long tie_pairs(long long run) { return run * (run - 1) / 2; }

// Counts strict inversions of v while sorting it (stable, ties never swap).
long long count_exchanges(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = count_exchanges(v, scratch, lo, mid) + count_exchanges(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<long long>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (constant(x) || constant(y)) throw Error(ErrorCode::kZeroVariance, "pearson: constant input");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return {CorrelationKind::kPearson, std::clamp(r, -1.0, 1.0), x.size()};
}

CorrelationResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  long long tied_x = 0, tied_xy = 0;
  long long run_x = 1, run_xy = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const bool same_x = x[order[i]] == x[order[i - 1]];
    const bool same_y = y[order[i]] == y[order[i - 1]];
    if (same_x) {
      ++run_x;
      if (same_y) {
        ++run_xy;
      } else {
        tied_xy += tie_pairs(run_xy);
        run_xy = 1;
      }
    } else {
      tied_x += tie_pairs(run_x);
      tied_xy += tie_pairs(run_xy);
      run_x = run_xy = 1;
    }
  }
  tied_x += tie_pairs(run_x);
  tied_xy += tie_pairs(run_xy);

  std::vector<double> ys(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const long long discordant = count_exchanges(ys, scratch, 0, n);

  long long tied_y = 0, run_y = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (ys[i] == ys[i - 1]) {
      ++run_y;
    } else {
      tied_y += tie_pairs(run_y);
      run_y = 1;
    }
  }
  tied_y += tie_pairs(run_y);

  const long long total = tie_pairs(static_cast<long long>(n));
  const long long untied_x = total - tied_x;  // C + D + Ty
  const long long untied_y = total - tied_y;  // C + D + Tx
  if (untied_x == 0 || untied_y == 0) throw Error(ErrorCode::kAllTied, "kendall: one side is entirely tied");
  const long long c_minus_d = total - tied_x - tied_y + tied_xy - 2 * discordant;
  const double tau = static_cast<double>(c_minus_d) /
                     std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
  return {CorrelationKind::kKendallTauB, std::clamp(tau, -1.0, 1.0), n};
}

}  // namespace lcmeval

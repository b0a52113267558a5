// include/lcmeval/correlation.hpp
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

#pragma once

#include <cstddef>
#include <span>

namespace lcmeval {

enum class CorrelationKind { kPearson, kKendallTauB };

struct CorrelationResult {
  CorrelationKind kind = CorrelationKind::kPearson;
  double value = 0.0;
  std::size_t n = 0;
};

/// Product-moment correlation. Throws LengthMismatch, SampleTooSmall (n < 2)
/// or ZeroVariance (either side constant).
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b, (C - D) / sqrt((C + D + Tx)(C + D + Ty)), computed in
/// O(n log n) by sorting and counting merge-sort exchanges. Ties are exact
/// equality. Throws LengthMismatch, SampleTooSmall, AllTied.
CorrelationResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

}  // namespace lcmeval

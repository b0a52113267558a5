// include/lcmeval/error.hpp
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

#include <stdexcept>
#include <string>

namespace lcmeval {

/// Every failure the library can report. The numeric values are part of the
/// C ABI (see lcmeval.h) and must not be reordered.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kMissingFile = 2,
  kIoError = 3,
  kParseError = 4,
  kUnresolvedReference = 5,
  kUnknownSegment = 6,
  kNonFiniteScore = 7,
  kDuplicateCell = 8,
  kEmptyCorpus = 9,
  kZeroLengthHypothesisCorpus = 10,
  kEmptySet = 11,
  kNotEnoughSegments = 12,
  kZeroVariance = 13,
  kMissingKey = 14,
  kInsufficientOverlap = 15,
  kNoPairableUnits = 16,
  kIncompleteTable = 17,
  kLengthMismatch = 18,
  kAllTied = 19,
  kTooFewSystems = 20,
  kSystemOnlyTable = 21,
  kNoVariants = 22,
  kDegenerateCorrelation = 23,
  kSampleTooSmall = 24,
  kCellMismatch = 25,
  kAlignmentMismatch = 26,
  kUnsupportedFormat = 27,
};

/// Coarse grouping used for process exit codes.
enum class ErrorCategory : int {
  kValidation = 1,
  kIo = 2,
  kStatistical = 3,
};

const char* error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lcmeval

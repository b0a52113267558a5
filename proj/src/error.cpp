// src/error.cpp
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

#include "lcmeval/error.hpp"

namespace lcmeval {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnresolvedReference: return "UnresolvedReference";
    case ErrorCode::kUnknownSegment: return "UnknownSegment";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kDuplicateCell: return "DuplicateCell";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kZeroLengthHypothesisCorpus: return "ZeroLengthHypothesisCorpus";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kNotEnoughSegments: return "NotEnoughSegments";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kMissingKey: return "MissingKey";
    case ErrorCode::kInsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::kNoPairableUnits: return "NoPairableUnits";
    case ErrorCode::kIncompleteTable: return "IncompleteTable";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kAllTied: return "AllTied";
    case ErrorCode::kTooFewSystems: return "TooFewSystems";
    case ErrorCode::kSystemOnlyTable: return "SystemOnlyTable";
    case ErrorCode::kNoVariants: return "NoVariants";
    case ErrorCode::kDegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorCode::kSampleTooSmall: return "SampleTooSmall";
    case ErrorCode::kCellMismatch: return "CellMismatch";
    case ErrorCode::kAlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile:
    case ErrorCode::kIoError:
      return ErrorCategory::kIo;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
    case ErrorCode::kUnresolvedReference:
    case ErrorCode::kUnknownSegment:
    case ErrorCode::kNonFiniteScore:
    case ErrorCode::kDuplicateCell:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kIncompleteTable:
    case ErrorCode::kCellMismatch:
    case ErrorCode::kAlignmentMismatch:
    case ErrorCode::kMissingKey:
      return ErrorCategory::kValidation;
    default:
      return ErrorCategory::kStatistical;
  }
}

}  // namespace lcmeval

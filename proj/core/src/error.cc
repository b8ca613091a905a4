// Copyright 2026 The Skim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skim/error.h"

namespace skim {
namespace {

std::string Format(ErrorCode code, const std::string& message, int line) {
  std::string out(ErrorCodeName(code));
  if (line > 0) out += " at line " + std::to_string(line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNoKnownEntities: return "NoKnownEntities";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyEntities: return "EmptyEntities";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kNonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorCode::kDuplicateEntity: return "DuplicateEntity";
    case ErrorCode::kMissingDimHeader: return "MissingDimHeader";
    case ErrorCode::kUnscorableSegment: return "UnscorableSegment";
    case ErrorCode::kUnscorableQuery: return "UnscorableQuery";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kIsolatedQuery: return "IsolatedQuery";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(Format(code, message, line)), code_(code), line_(line) {}

bool IsModelError(ErrorCode code) {
  return code == ErrorCode::kUnscorableQuery ||
         code == ErrorCode::kIsolatedQuery;
}

}  // namespace skim

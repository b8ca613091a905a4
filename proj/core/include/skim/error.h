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

#ifndef SKIM_ERROR_H_
#define SKIM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace skim {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kZeroVector,
  kNoKnownEntities,
  kParseError,
  kEmptyEntities,
  kDuplicateIndex,
  kNonMonotoneTimestamps,
  kDuplicateEntity,
  kMissingDimHeader,
  kUnscorableSegment,
  kUnscorableQuery,
  kKTooLarge,
  kIsolatedQuery,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library is an Error carrying a code. Parse
// errors additionally carry the 1-based input line (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  int line_;
};

// True for errors raised by a model rather than by malformed input.
bool IsModelError(ErrorCode code);

}  // namespace skim

#endif  // SKIM_ERROR_H_

/* Copyright 2026 The refprior Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef REFPRIOR_ERROR_HPP_
#define REFPRIOR_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace refprior {

enum class ErrorKind {
  kInvalidBox,
  kEmptyPhrase,
  kDegenerateBox,
  kLengthMismatch,
  kEmptyCandidates,
  kNoPositives,
  kAssignmentMismatch,
  kEmptyDataset,
  kInsufficientPool,
  kInvalidSpec,
  kMissingPrediction,
  kParseError,
  kDuplicateId,
  kDimensionMismatch,
  kInvalidSample,
  kIoError,
  kUsage,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure surfaced by the library carries a kind so the CLI can report
// it as a machine-readable object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace refprior

#endif  // REFPRIOR_ERROR_HPP_

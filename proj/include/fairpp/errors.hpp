// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRPP_ERRORS_HPP_
#define FAIRPP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fairpp {

// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorClass { kConfig, kData, kSolver };

// Fine-grained reason, stable across releases so callers and tests can
// match on it instead of on message text.
enum class ErrorKind {
  kInvalidInterval,
  kInvalidBins,
  kInvalidParameter,
  kEmptyInput,
  kMismatchedLength,
  kMissingColumn,
  kUnparseableCell,
  kEmptyFile,
  kUnknownGroup,
  kDegenerateWeight,
  kBudgetExhausted,
  kSolverFailure,
};

inline ErrorClass ClassOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInterval:
    case ErrorKind::kInvalidBins:
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kBudgetExhausted:
      return ErrorClass::kConfig;
    case ErrorKind::kSolverFailure:
      return ErrorClass::kSolver;
    default:
      return ErrorClass::kData;
  }
}

inline const char* KindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInterval: return "invalid-interval";
    case ErrorKind::kInvalidBins: return "invalid-bins";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kMismatchedLength: return "mismatched-length";
    case ErrorKind::kMissingColumn: return "missing-column";
    case ErrorKind::kUnparseableCell: return "unparseable-cell";
    case ErrorKind::kEmptyFile: return "empty-file";
    case ErrorKind::kUnknownGroup: return "unknown-group";
    case ErrorKind::kDegenerateWeight: return "degenerate-weight";
    case ErrorKind::kBudgetExhausted: return "budget-exhausted";
    case ErrorKind::kSolverFailure: return "solver-failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(KindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  ErrorClass error_class() const { return ClassOf(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace fairpp

#endif  // FAIRPP_ERRORS_HPP_

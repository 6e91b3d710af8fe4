// Copyright 2026 The magcoloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAGCOLOC_ERROR_HPP_
#define MAGCOLOC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace magcoloc {

enum class ErrorKind {
  kInvalidArgument,
  kRejectedInput,      // non-finite sensor values
  kInvalidInput,       // malformed or unsorted data
  kSequenceTooShort,
  kInfeasibleBand,
  kDegenerateSeries,   // zero variance, e.g. a flat bus trajectory
  kOracleSizeExceeded,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kRejectedInput: return "rejected-input";
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kSequenceTooShort: return "sequence-too-short";
    case ErrorKind::kInfeasibleBand: return "infeasible-band";
    case ErrorKind::kDegenerateSeries: return "degenerate-series";
    case ErrorKind::kOracleSizeExceeded: return "oracle-size-exceeded";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace detail
}  // namespace magcoloc

#endif  // MAGCOLOC_ERROR_HPP_

//
// Copyright 2026 The entailgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <stdexcept>
#include <string>

namespace entailgen {

enum class ErrorCode {
  kEmptySentence,
  kNotAVerb,
  kIo,
  kFormat,
  kRuleNotApplicable,
  kEmptyBatch,
  kInvalidReward,
  kConnectionFailed,
  kProtocol,
  kTimeout,
  kConfig,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptySentence: return "EmptySentence";
    case ErrorCode::kNotAVerb: return "NotAVerb";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kRuleNotApplicable: return "RuleNotApplicable";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kInvalidReward: return "InvalidReward";
    case ErrorCode::kConnectionFailed: return "ConnectionFailed";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace entailgen

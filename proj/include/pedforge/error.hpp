// Copyright 2026 The pedforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pedforge {

/// Stable, machine-readable error tokens. The HTTP layer maps each one to
/// exactly one status code; the tokens themselves are frozen per API version.
enum class ErrorCode {
  Validation,
  ParseError,
  InvalidSlotText,
  RegisterMismatch,
  DuplicateRationale,
  NotFound,
  GateNotSatisfied,
  IncompleteDocument,
  NotAligned,
  NoAcceptedCandidate,
  MaxDepth,
  OutdatedArtifact,
  ProviderFailure,
  StorageFailure,
  CorruptFile,
  ProjectLocked,
  Internal,
};

std::string_view to_string(ErrorCode code);
int http_status(ErrorCode code);

/// Domain error. Every failure that leaves a module is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json detail = nullptr)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

  /// {"code": ..., "message": ..., "detail": ...}
  nlohmann::json to_json() const;

 private:
  ErrorCode code_;
  nlohmann::json detail_;
};

}  // namespace pedforge

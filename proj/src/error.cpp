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

#include "pedforge/error.hpp"

#include <cctype>

#include "pedforge/text.hpp"

namespace pedforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "VALIDATION";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::InvalidSlotText: return "INVALID_SLOT_TEXT";
    case ErrorCode::RegisterMismatch: return "REGISTER_MISMATCH";
    case ErrorCode::DuplicateRationale: return "DUPLICATE_RATIONALE";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::GateNotSatisfied: return "GATE_NOT_SATISFIED";
    case ErrorCode::IncompleteDocument: return "INCOMPLETE_DOCUMENT";
    case ErrorCode::NotAligned: return "NOT_ALIGNED";
    case ErrorCode::NoAcceptedCandidate: return "NO_ACCEPTED_CANDIDATE";
    case ErrorCode::MaxDepth: return "MAX_DEPTH";
    case ErrorCode::OutdatedArtifact: return "OUTDATED_ARTIFACT";
    case ErrorCode::ProviderFailure: return "PROVIDER_FAILURE";
    case ErrorCode::StorageFailure: return "STORAGE_FAILURE";
    case ErrorCode::CorruptFile: return "CORRUPT_FILE";
    case ErrorCode::ProjectLocked: return "PROJECT_LOCKED";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSlotText:
    case ErrorCode::RegisterMismatch:
    case ErrorCode::DuplicateRationale:
      return 400;
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::GateNotSatisfied:
    case ErrorCode::IncompleteDocument:
    case ErrorCode::NotAligned:
    case ErrorCode::NoAcceptedCandidate:
    case ErrorCode::MaxDepth:
    case ErrorCode::OutdatedArtifact:
    case ErrorCode::ProjectLocked:
      return 409;
    case ErrorCode::ProviderFailure:
      return 502;
    case ErrorCode::StorageFailure:
    case ErrorCode::CorruptFile:
    case ErrorCode::Internal:
      return 500;
  }
  return 500;
}

nlohmann::json Error::to_json() const {
  return {{"code", std::string(to_string(code_))},
          {"message", what()},
          {"detail", detail_}};
}

namespace text {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) words.emplace_back(s.substr(start, i - start));
  }
  return words;
}

bool contains_icase(std::string_view haystack, std::string_view needle) {
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ (seed * 0x9E3779B97F4A7C15ull);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace text
}  // namespace pedforge

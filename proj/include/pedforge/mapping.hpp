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

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pedforge/cnl.hpp"

namespace pedforge::mapping {

using cnl::SlotKind;

/// One row of the teaching -> game correspondence table.
struct MappingRule {
  SlotKind kind;
  std::string_view element;           // row label as printed in the table
  std::string_view teaching_meaning;
  std::string_view game_meaning;
};

const MappingRule& mapping_row(SlotKind kind);
const std::array<MappingRule, 4>& mapping_table();

nlohmann::json mapping_table_json();

/// Explains one game slot in terms of the same-kind pedagogy slot.
struct SlotRationale {
  SlotKind kind;
  std::string explanation;
  std::string pedagogy_slot_text;
  // Set when the game slot was edited without a fresh rationale; the
  // rationale then no longer vouches for the slot it annotates.
  bool pending_review = false;

  friend bool operator==(const SlotRationale&, const SlotRationale&) = default;
};

nlohmann::json to_json(const SlotRationale& r);
SlotRationale rationale_from_json(const nlohmann::json& j);

struct Aligned {
  SlotRationale rationale;
};
struct MissingRationale {};
struct StaleReference {
  std::string cited_text;
  std::string current_text;
};
using AlignmentStatus = std::variant<Aligned, MissingRationale, StaleReference>;

struct AlignmentReport {
  std::array<AlignmentStatus, 4> status;

  const AlignmentStatus& at(SlotKind k) const { return status[cnl::index_of(k)]; }
  std::vector<SlotKind> stale_kinds() const;
  std::vector<SlotKind> missing_kinds() const;
};

/// Kind-to-kind alignment of a game candidate against the current pedagogy
/// sentence. Throws Error(RegisterMismatch) on wrong registers and
/// Error(DuplicateRationale) when two rationales share a kind.
AlignmentReport align_candidate(const cnl::ControlledSentence& pedagogy,
                                const cnl::ControlledSentence& candidate,
                                const std::vector<SlotRationale>& rationales);

bool is_fully_aligned(const AlignmentReport& report);

nlohmann::json to_json(const AlignmentReport& report);

}  // namespace pedforge::mapping

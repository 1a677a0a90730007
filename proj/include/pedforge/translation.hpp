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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedforge/cnl.hpp"
#include "pedforge/gateway.hpp"
#include "pedforge/mapping.hpp"

namespace pedforge::translation {

using cnl::ControlledSentence;
using cnl::SlotKind;

inline constexpr int kDefaultCandidateCount = 3;
inline constexpr int kMaxCandidateCount = 5;

enum class Origin { AiGenerated, UserAuthored, UserEdited };

std::string_view to_string(Origin o);

/// One revision of a game-register translation. Edits and regenerations
/// produce a new revision under the same id.
struct TranslationCandidate {
  std::string id;
  int revision = 1;
  ControlledSentence game_sentence;
  std::vector<mapping::SlotRationale> rationales;
  int source_pedagogy_version = 0;
  Origin origin = Origin::AiGenerated;
  int variant = 0;  // generation variant sent to the provider

  const mapping::SlotRationale* rationale(SlotKind k) const;
};

nlohmann::json to_json(const TranslationCandidate& c);
TranslationCandidate candidate_from_json(const nlohmann::json& j);

mapping::AlignmentReport alignment(const TranslationCandidate& c, const ControlledSentence& pedagogy);

/// The pedagogy sentence a translation is made against.
struct PedagogySource {
  const ControlledSentence& sentence;
  int version;
};

/// Requests n candidates (1..5), one provider call per member, with
/// variants first_variant .. first_variant+n-1. Members that come back
/// malformed are retried individually by the gateway. Returned candidates
/// have no id yet. Throws Error(Validation) for n out of range and
/// Error(ProviderFailure).
std::vector<TranslationCandidate> generate_candidates(const PedagogySource& pedagogy, int n,
                                                      const llm::Gateway& gateway,
                                                      int first_variant = 0);

/// Next revision in which only `kind` and its rationale may differ.
TranslationCandidate regenerate_slot(const TranslationCandidate& c, SlotKind kind,
                                     const PedagogySource& pedagogy, const llm::Gateway& gateway);

/// Next revision with the instructor's text in `kind`. Without a new
/// rationale the old one is flagged for review, so the candidate stops
/// being fully aligned. Throws Error(InvalidSlotText).
TranslationCandidate edit_slot(const TranslationCandidate& c, SlotKind kind,
                               std::string_view new_text,
                               const std::optional<std::string>& new_rationale,
                               const PedagogySource& pedagogy);

/// Instructor-written candidate. Rationales may be partial; a candidate
/// with missing rationales can be stored but not accepted.
TranslationCandidate author_candidate(const ControlledSentence& game,
                                      const std::vector<std::pair<SlotKind, std::string>>& explanations,
                                      const PedagogySource& pedagogy);

struct CandidateSet {
  int pedagogy_version = 0;
  std::vector<TranslationCandidate> candidates;  // current revision of each, insertion order
  std::optional<std::string> accepted;

  const TranslationCandidate* find(const std::string& id) const;
};

/// Throws Error(NotFound) for a non-member and Error(NotAligned) with the
/// stale and missing kinds in the detail.
CandidateSet accept_candidate(const CandidateSet& set, const std::string& candidate_id,
                              const ControlledSentence& pedagogy);

}  // namespace pedforge::translation

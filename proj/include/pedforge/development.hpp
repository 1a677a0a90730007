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
#include "pedforge/extraction.hpp"
#include "pedforge/gateway.hpp"
#include "pedforge/pseudocode.hpp"
#include "pedforge/translation.hpp"

namespace pedforge::development {

/// Zoom ladder: Sentence < Paragraph < Pseudocode.
enum class ExpansionLevel { Sentence = 0, Paragraph = 1, Pseudocode = 2 };

std::string_view to_string(ExpansionLevel l);
std::optional<ExpansionLevel> level_from_string(std::string_view s);

struct ExpansionArtifact {
  std::string id;
  ExpansionLevel level = ExpansionLevel::Sentence;
  std::string content;
  std::optional<std::string> parent;        // one level down; absent for sentences
  std::optional<std::string> derived_from;  // sentences only: the version this one refines
  std::string source_candidate;
  int source_revision = 0;
  int version = 1;                          // per-level counter
  bool outdated = false;
};

nlohmann::json to_json(const ExpansionArtifact& a);
ExpansionArtifact artifact_from_json(const nlohmann::json& j);

/// Everything a refinement request is allowed to see.
struct RefinementContext {
  const extraction::RequirementDocument& document;
  const cnl::ControlledSentence& pedagogy;
  const translation::TranslationCandidate& accepted;
  const cnl::ControlledSentence& current;   // newest game sentence version
  const std::vector<std::string>& prior_turns;
};

/// Applies an instructor instruction to the current game sentence. The
/// result always parses in the game register. Throws Error(ProviderFailure)
/// or Error(Validation) for a blank instruction.
cnl::ControlledSentence refine_sentence(const RefinementContext& ctx, std::string_view instruction,
                                        const llm::Gateway& gateway);

/// Produces the next rung above `from`. `game` is the sentence at the root
/// of `from`'s chain. The returned artifact carries level, content, parent
/// and source; id and version are assigned by the caller. Throws
/// Error(MaxDepth) on a pseudocode artifact, Error(ProviderFailure).
ExpansionArtifact zoom_in(const ExpansionArtifact& from, const cnl::ControlledSentence& game,
                          const llm::Gateway& gateway);

}  // namespace pedforge::development

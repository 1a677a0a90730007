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

#include "pedforge/development.hpp"

#include "pedforge/error.hpp"
#include "pedforge/text.hpp"

namespace pedforge::development {

std::string_view to_string(ExpansionLevel l) {
  switch (l) {
    case ExpansionLevel::Sentence: return "sentence";
    case ExpansionLevel::Paragraph: return "paragraph";
    case ExpansionLevel::Pseudocode: return "pseudocode";
  }
  return "sentence";
}

std::optional<ExpansionLevel> level_from_string(std::string_view s) {
  if (s == "sentence") return ExpansionLevel::Sentence;
  if (s == "paragraph") return ExpansionLevel::Paragraph;
  if (s == "pseudocode") return ExpansionLevel::Pseudocode;
  return std::nullopt;
}

nlohmann::json to_json(const ExpansionArtifact& a) {
  nlohmann::json j = {{"id", a.id},
                      {"level", std::string(to_string(a.level))},
                      {"content", a.content},
                      {"parent", nullptr},
                      {"derived_from", nullptr},
                      {"source_candidate", a.source_candidate},
                      {"source_revision", a.source_revision},
                      {"version", a.version},
                      {"outdated", a.outdated}};
  if (a.parent) j["parent"] = *a.parent;
  if (a.derived_from) j["derived_from"] = *a.derived_from;
  return j;
}

ExpansionArtifact artifact_from_json(const nlohmann::json& j) {
  ExpansionArtifact a;
  a.id = j.at("id").get<std::string>();
  auto level = level_from_string(j.at("level").get<std::string>());
  if (!level) throw Error(ErrorCode::Validation, "unknown artifact level");
  a.level = *level;
  a.content = j.at("content").get<std::string>();
  if (j.contains("parent") && j["parent"].is_string()) a.parent = j["parent"].get<std::string>();
  if (j.contains("derived_from") && j["derived_from"].is_string()) {
    a.derived_from = j["derived_from"].get<std::string>();
  }
  a.source_candidate = j.value("source_candidate", "");
  a.source_revision = j.value("source_revision", 0);
  a.version = j.value("version", 1);
  a.outdated = j.value("outdated", false);
  return a;
}

cnl::ControlledSentence refine_sentence(const RefinementContext& ctx, std::string_view instruction,
                                        const llm::Gateway& gateway) {
  auto ins = text::trim(instruction);
  if (ins.empty()) throw Error(ErrorCode::Validation, "instruction must be nonempty");

  llm::PromptSpec spec;
  spec.phase = llm::Phase::Development;
  spec.objective =
      "Revise the current game sentence as the instructor asks. Change only what the "
      "instruction requires and keep the controlled template.";
  spec.context_blocks.push_back({"Requirement document", extraction::document_summary(ctx.document)});
  spec.context_blocks.push_back({"Pedagogy sentence", cnl::render_canonical(ctx.pedagogy)});
  std::string accepted = cnl::render_canonical(ctx.accepted.game_sentence);
  for (const auto& r : ctx.accepted.rationales) {
    accepted += "\n" + std::string(cnl::to_string(r.kind)) + ": " + r.explanation;
  }
  spec.context_blocks.push_back({"Accepted candidate", accepted});
  std::string turns;
  for (const auto& t : ctx.prior_turns) turns += "- " + t + "\n";
  if (!turns.empty()) turns.pop_back();
  spec.context_blocks.push_back({"Prior chat turns", turns});
  spec.context_blocks.push_back({"Current game sentence", cnl::render_canonical(ctx.current)});
  spec.context_blocks.push_back({"Instruction", std::string(ins)});
  spec.output_contract = llm::OutputContract::sentence(cnl::Register::Game);
  auto result = gateway.complete(spec);
  return cnl::parse_sentence(result.raw_text, cnl::Register::Game);
}

ExpansionArtifact zoom_in(const ExpansionArtifact& from, const cnl::ControlledSentence& game,
                          const llm::Gateway& gateway) {
  if (from.level == ExpansionLevel::Pseudocode) {
    throw Error(ErrorCode::MaxDepth, "pseudocode is the last rung of the zoom ladder",
                {{"artifact", from.id}});
  }
  llm::PromptSpec spec;
  spec.phase = llm::Phase::Development;
  spec.context_blocks.push_back({"Game sentence", cnl::render_canonical(game)});

  ExpansionArtifact next;
  next.parent = from.id;
  next.source_candidate = from.source_candidate;
  next.source_revision = from.source_revision;
  if (from.level == ExpansionLevel::Sentence) {
    next.level = ExpansionLevel::Paragraph;
    spec.objective =
        "Describe how this game plays in one paragraph, including at least one concrete play "
        "example introduced with \"For example\".";
    spec.output_contract = llm::OutputContract::free_text({std::string(kPlayExampleMarker)});
  } else {
    next.level = ExpansionLevel::Pseudocode;
    spec.objective = "Write pseudocode for the game's procedures that a developer can build from.";
    spec.context_blocks.push_back({"Paragraph", from.content});
    spec.output_contract = llm::OutputContract::pseudocode(game);
  }
  next.content = gateway.complete(spec).raw_text;
  if (next.level == ExpansionLevel::Pseudocode) {
    // Gateway already enforced the format; keep the invariant local too.
    auto check = validate_pseudocode(next.content, game);
    if (!check.pass) throw Error(ErrorCode::Internal, "validated pseudocode failed the format check");
    if (next.content.empty() || next.content.back() != '\n') next.content += '\n';
  }
  return next;
}

}  // namespace pedforge::development

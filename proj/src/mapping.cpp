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

#include "pedforge/mapping.hpp"

#include <algorithm>
#include <optional>

#include "pedforge/error.hpp"

namespace pedforge::mapping {

namespace {

constexpr std::array<MappingRule, 4> kTable = {{
    {SlotKind::Adverb, "Adverb",
     "Specifies performance requirements for the targeted ability.",
     "Rules and parameters that configure difficulty and success conditions."},
    {SlotKind::Verb, "Verbs",
     "Expresses the targeted teaching ability as an observable action.",
     "Game mechanics that define the primary player action and interaction pattern."},
    {SlotKind::Noun, "Nouns",
     "Denotes the focal teaching concept or content domain.",
     "Content models and in-game artifacts that instantiate the concept."},
    {SlotKind::Adjective, "Adjectives",
     "Characterizes the learning context, realism level, and instructional tone.",
     "Aesthetic and contextual profiles that define the game world and framing."},
}};

}  // namespace

const MappingRule& mapping_row(SlotKind kind) { return kTable[cnl::index_of(kind)]; }

const std::array<MappingRule, 4>& mapping_table() { return kTable; }

nlohmann::json mapping_table_json() {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : kTable) {
    rows.push_back({{"kind", std::string(cnl::to_string(r.kind))},
                    {"element", std::string(r.element)},
                    {"color", std::string(cnl::slot_color(r.kind))},
                    {"teaching_meaning", std::string(r.teaching_meaning)},
                    {"game_meaning", std::string(r.game_meaning)},
                    {"direction", "teaching->game"}});
  }
  return {{"rows", rows}};
}

nlohmann::json to_json(const SlotRationale& r) {
  return {{"kind", std::string(cnl::to_string(r.kind))},
          {"explanation", r.explanation},
          {"pedagogy_slot_text", r.pedagogy_slot_text},
          {"pending_review", r.pending_review}};
}

SlotRationale rationale_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Validation, "rationale must be an object");
  auto kind = cnl::slot_kind_from_string(j.value("kind", ""));
  if (!kind) throw Error(ErrorCode::Validation, "rationale has an unknown slot kind");
  SlotRationale r{*kind, j.value("explanation", ""), j.value("pedagogy_slot_text", ""),
                  j.value("pending_review", false)};
  if (r.explanation.empty()) {
    throw Error(ErrorCode::Validation, "rationale explanation must be nonempty",
                {{"kind", std::string(cnl::to_string(*kind))}});
  }
  return r;
}

std::vector<SlotKind> AlignmentReport::stale_kinds() const {
  std::vector<SlotKind> out;
  for (auto k : cnl::kSlotKinds) {
    if (std::holds_alternative<StaleReference>(at(k))) out.push_back(k);
  }
  return out;
}

std::vector<SlotKind> AlignmentReport::missing_kinds() const {
  std::vector<SlotKind> out;
  for (auto k : cnl::kSlotKinds) {
    if (std::holds_alternative<MissingRationale>(at(k))) out.push_back(k);
  }
  return out;
}

AlignmentReport align_candidate(const cnl::ControlledSentence& pedagogy,
                                const cnl::ControlledSentence& candidate,
                                const std::vector<SlotRationale>& rationales) {
  if (pedagogy.reg() != cnl::Register::Teaching || candidate.reg() != cnl::Register::Game) {
    throw Error(ErrorCode::RegisterMismatch,
                "alignment needs a teaching sentence and a game sentence");
  }
  std::array<std::optional<SlotRationale>, 4> by_kind;
  for (const auto& r : rationales) {
    auto& slot = by_kind[cnl::index_of(r.kind)];
    if (slot) {
      throw Error(ErrorCode::DuplicateRationale,
                  "two rationales for " + std::string(cnl::to_string(r.kind)),
                  {{"kind", std::string(cnl::to_string(r.kind))}});
    }
    slot = r;
  }
  AlignmentReport report;
  for (auto k : cnl::kSlotKinds) {
    const auto& r = by_kind[cnl::index_of(k)];
    auto& status = report.status[cnl::index_of(k)];
    if (!r || r->explanation.empty()) {
      status = MissingRationale{};
    } else if (r->pending_review || r->pedagogy_slot_text != pedagogy.slot(k)) {
      status = StaleReference{r->pedagogy_slot_text, pedagogy.slot(k)};
    } else {
      status = Aligned{*r};
    }
  }
  return report;
}

bool is_fully_aligned(const AlignmentReport& report) {
  return std::all_of(report.status.begin(), report.status.end(), [](const AlignmentStatus& s) {
    return std::holds_alternative<Aligned>(s);
  });
}

nlohmann::json to_json(const AlignmentReport& report) {
  nlohmann::json j = nlohmann::json::object();
  for (auto k : cnl::kSlotKinds) {
    const auto& s = report.at(k);
    nlohmann::json e;
    if (const auto* a = std::get_if<Aligned>(&s)) {
      e = {{"status", "aligned"}, {"rationale", to_json(a->rationale)}};
    } else if (const auto* st = std::get_if<StaleReference>(&s)) {
      e = {{"status", "stale_reference"},
           {"cited_text", st->cited_text},
           {"current_text", st->current_text}};
    } else {
      e = {{"status", "missing_rationale"}};
    }
    j[std::string(cnl::to_string(k))] = e;
  }
  j["fully_aligned"] = is_fully_aligned(report);
  return j;
}

}  // namespace pedforge::mapping

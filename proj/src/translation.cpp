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

#include "pedforge/translation.hpp"

#include <future>

#include "pedforge/error.hpp"
#include "pedforge/text.hpp"

namespace pedforge::translation {

namespace {

bool text_is_blank(std::string_view s) { return text::trim(s).empty(); }

llm::PromptSpec candidate_prompt(const PedagogySource& pedagogy, int variant) {
  llm::PromptSpec spec;
  spec.phase = llm::Phase::Translation;
  spec.objective =
      "Translate the pedagogy sentence into one game-language sentence with the same four slots, "
      "and justify each game slot against the same-kind pedagogy slot.";
  std::string table;
  for (const auto& row : mapping::mapping_table()) {
    table += std::string(row.element) + ": " + std::string(row.teaching_meaning) + " -> " +
             std::string(row.game_meaning) + "\n";
  }
  table.pop_back();
  spec.context_blocks.push_back({"Mapping table", table});
  spec.context_blocks.push_back({"Pedagogy sentence", cnl::render_canonical(pedagogy.sentence)});
  spec.context_blocks.push_back({"Candidate variant", std::to_string(variant)});
  spec.output_contract = llm::OutputContract::candidate();
  return spec;
}

std::vector<mapping::SlotRationale> rationales_from(const llm::CandidateReply& reply,
                                                    const ControlledSentence& pedagogy) {
  std::vector<mapping::SlotRationale> out;
  for (auto k : cnl::kSlotKinds) {
    out.push_back({k, reply.explanations[cnl::index_of(k)], pedagogy.slot(k), false});
  }
  return out;
}

llm::CandidateReply reply_of(const llm::ProviderResult& r) {
  auto parsed = llm::parse_candidate_reply(r.raw_text);
  if (auto* err = std::get_if<std::string>(&parsed)) {
    // The gateway validated this reply; reaching here is a contract bug.
    throw Error(ErrorCode::Internal, "validated candidate failed to parse: " + *err);
  }
  return std::get<llm::CandidateReply>(std::move(parsed));
}

}  // namespace

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::AiGenerated: return "ai_generated";
    case Origin::UserAuthored: return "user_authored";
    case Origin::UserEdited: return "user_edited";
  }
  return "ai_generated";
}

const mapping::SlotRationale* TranslationCandidate::rationale(SlotKind k) const {
  for (const auto& r : rationales) {
    if (r.kind == k) return &r;
  }
  return nullptr;
}

nlohmann::json to_json(const TranslationCandidate& c) {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : c.rationales) rs.push_back(mapping::to_json(r));
  return {{"id", c.id},
          {"revision", c.revision},
          {"sentence", cnl::to_json(c.game_sentence)},
          {"canonical", cnl::render_canonical(c.game_sentence)},
          {"rationales", rs},
          {"source_pedagogy_version", c.source_pedagogy_version},
          {"origin", std::string(to_string(c.origin))},
          {"variant", c.variant}};
}

TranslationCandidate candidate_from_json(const nlohmann::json& j) {
  Origin origin = Origin::AiGenerated;
  auto o = j.value("origin", "ai_generated");
  if (o == "user_authored") origin = Origin::UserAuthored;
  if (o == "user_edited") origin = Origin::UserEdited;
  std::vector<mapping::SlotRationale> rs;
  for (const auto& r : j.value("rationales", nlohmann::json::array())) {
    rs.push_back(mapping::rationale_from_json(r));
  }
  return TranslationCandidate{j.value("id", ""),
                              j.value("revision", 1),
                              cnl::sentence_from_json(j.at("sentence")),
                              std::move(rs),
                              j.value("source_pedagogy_version", 0),
                              origin,
                              j.value("variant", 0)};
}

mapping::AlignmentReport alignment(const TranslationCandidate& c, const ControlledSentence& pedagogy) {
  return mapping::align_candidate(pedagogy, c.game_sentence, c.rationales);
}

std::vector<TranslationCandidate> generate_candidates(const PedagogySource& pedagogy, int n,
                                                      const llm::Gateway& gateway,
                                                      int first_variant) {
  if (n < 1 || n > kMaxCandidateCount) {
    throw Error(ErrorCode::Validation, "candidate count must be between 1 and 5",
                {{"n", n}});
  }
  if (pedagogy.sentence.reg() != cnl::Register::Teaching) {
    throw Error(ErrorCode::RegisterMismatch, "candidates translate a teaching sentence");
  }
  // Members are independent requests; run them side by side and commit
  // only once every one of them is valid.
  std::vector<std::future<llm::ProviderResult>> pending;
  for (int i = 0; i < n; ++i) {
    auto spec = candidate_prompt(pedagogy, first_variant + i);
    pending.push_back(std::async(std::launch::async,
                                 [&gateway, spec = std::move(spec)] { return gateway.complete(spec); }));
  }
  std::vector<llm::ProviderResult> results;
  std::optional<Error> failure;
  for (auto& f : pending) {
    try {
      results.push_back(f.get());
    } catch (const Error& e) {
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;

  std::vector<TranslationCandidate> out;
  for (int i = 0; i < n; ++i) {
    auto reply = reply_of(results[static_cast<std::size_t>(i)]);
    out.push_back(TranslationCandidate{"", 1, reply.sentence, rationales_from(reply, pedagogy.sentence),
                                       pedagogy.version, Origin::AiGenerated, first_variant + i});
  }
  return out;
}

TranslationCandidate regenerate_slot(const TranslationCandidate& c, SlotKind kind,
                                     const PedagogySource& pedagogy, const llm::Gateway& gateway) {
  const int variant = c.variant + c.revision;
  auto spec = candidate_prompt(pedagogy, variant);
  std::array<std::string, 4> current_why;
  for (auto k : cnl::kSlotKinds) {
    const auto* r = c.rationale(k);
    current_why[cnl::index_of(k)] = r ? r->explanation : "(none)";
  }
  spec.objective =
      "Propose a new " + std::string(cnl::to_string(kind)) +
      " slot for the current game candidate and justify it against the pedagogy " +
      std::string(cnl::to_string(kind)) + ". Reply with the full candidate; only that slot is used.";
  spec.context_blocks.push_back(
      {"Current candidate", llm::format_candidate_reply(c.game_sentence, current_why)});
  spec.context_blocks.push_back({"Regenerate slot", std::string(cnl::to_string(kind))});
  auto reply = reply_of(gateway.complete(spec));

  TranslationCandidate next = c;
  next.revision = c.revision + 1;
  next.game_sentence = c.game_sentence.with_slot(kind, reply.sentence.slot(kind));
  next.origin = Origin::AiGenerated;
  next.source_pedagogy_version = pedagogy.version;
  mapping::SlotRationale fresh{kind, reply.explanations[cnl::index_of(kind)],
                               pedagogy.sentence.slot(kind), false};
  bool replaced = false;
  for (auto& r : next.rationales) {
    if (r.kind == kind) {
      r = fresh;
      replaced = true;
    }
  }
  if (!replaced) next.rationales.push_back(fresh);
  return next;
}

TranslationCandidate edit_slot(const TranslationCandidate& c, SlotKind kind,
                               std::string_view new_text,
                               const std::optional<std::string>& new_rationale,
                               const PedagogySource& pedagogy) {
  TranslationCandidate next = c;
  next.game_sentence = c.game_sentence.with_slot(kind, new_text);
  next.revision = c.revision + 1;
  next.origin = Origin::UserEdited;
  next.source_pedagogy_version = pedagogy.version;
  if (new_rationale && !text_is_blank(*new_rationale)) {
    mapping::SlotRationale fresh{kind, *new_rationale, pedagogy.sentence.slot(kind), false};
    bool replaced = false;
    for (auto& r : next.rationales) {
      if (r.kind == kind) {
        r = fresh;
        replaced = true;
      }
    }
    if (!replaced) next.rationales.push_back(fresh);
  } else {
    for (auto& r : next.rationales) {
      if (r.kind == kind) r.pending_review = true;
    }
  }
  return next;
}

TranslationCandidate author_candidate(
    const ControlledSentence& game, const std::vector<std::pair<SlotKind, std::string>>& explanations,
    const PedagogySource& pedagogy) {
  if (game.reg() != cnl::Register::Game) {
    throw Error(ErrorCode::RegisterMismatch, "authored candidates are game sentences");
  }
  TranslationCandidate c{"", 1, game, {}, pedagogy.version, Origin::UserAuthored, 0};
  for (const auto& [kind, text] : explanations) {
    if (c.rationale(kind)) {
      throw Error(ErrorCode::DuplicateRationale,
                  "two rationales for " + std::string(cnl::to_string(kind)),
                  {{"kind", std::string(cnl::to_string(kind))}});
    }
    if (text_is_blank(text)) continue;
    c.rationales.push_back({kind, text, pedagogy.sentence.slot(kind), false});
  }
  return c;
}

const TranslationCandidate* CandidateSet::find(const std::string& id) const {
  for (const auto& c : candidates) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

CandidateSet accept_candidate(const CandidateSet& set, const std::string& candidate_id,
                              const ControlledSentence& pedagogy) {
  const auto* c = set.find(candidate_id);
  if (!c) {
    throw Error(ErrorCode::NotFound, "no candidate '" + candidate_id + "' in this project",
                {{"candidate", candidate_id}});
  }
  auto report = alignment(*c, pedagogy);
  if (!mapping::is_fully_aligned(report)) {
    nlohmann::json stale = nlohmann::json::array();
    nlohmann::json missing = nlohmann::json::array();
    for (auto k : report.stale_kinds()) stale.push_back(std::string(cnl::to_string(k)));
    for (auto k : report.missing_kinds()) missing.push_back(std::string(cnl::to_string(k)));
    throw Error(ErrorCode::NotAligned,
                "candidate '" + candidate_id + "' is not aligned with the current pedagogy sentence",
                {{"candidate", candidate_id}, {"stale", stale}, {"missing", missing}});
  }
  CandidateSet next = set;
  next.accepted = candidate_id;
  return next;
}

}  // namespace pedforge::translation

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

#include "pedforge/workbench.hpp"

#include "pedforge/development.hpp"
#include "pedforge/error.hpp"
#include "pedforge/mapping.hpp"
#include "pedforge/text.hpp"
#include "pedforge/translation.hpp"

namespace pedforge::service {

namespace {

using development::ExpansionArtifact;
using development::ExpansionLevel;
using store::Action;
using store::Actor;
using store::PendingEvent;
using store::ProjectState;

extraction::RequirementField parse_field(const std::string& s) {
  auto f = extraction::field_from_string(s);
  if (!f) {
    throw Error(ErrorCode::Validation, "unknown requirement field '" + s + "'",
                {{"field", s},
                 {"expected", {"concept_scope", "materials", "observable_action",
                               "performance_target", "context"}}});
  }
  return *f;
}

cnl::SlotKind parse_kind(const std::string& s) {
  auto k = cnl::slot_kind_from_string(s);
  if (!k) {
    throw Error(ErrorCode::Validation, "unknown slot kind '" + s + "'",
                {{"kind", s}, {"expected", {"adverb", "verb", "noun", "adjective"}}});
  }
  return *k;
}

std::string kind_token(cnl::SlotKind k) { return std::string(cnl::to_string(k)); }

const store::PedagogyVersion& require_pedagogy(const ProjectState& s) {
  const auto* p = s.current_pedagogy();
  if (!p) {
    throw Error(ErrorCode::GateNotSatisfied, "compose the pedagogy sentence first",
                {{"reason", "no pedagogy sentence"}});
  }
  return *p;
}

const translation::TranslationCandidate& require_candidate(const ProjectState& s,
                                                           const std::string& cid) {
  const auto* c = s.candidate(cid);
  if (!c) throw Error(ErrorCode::NotFound, "no candidate '" + cid + "'", {{"candidate", cid}});
  return *c;
}

nlohmann::json question_view(const extraction::NextQuestion& q) {
  if (std::holds_alternative<extraction::Complete>(q)) return {{"complete", true}};
  const auto& question = std::get<extraction::Question>(q);
  return {{"complete", false},
          {"field", std::string(extraction::to_string(question.field))},
          {"number", extraction::index_of(question.field) + 1},
          {"prompt", question.prompt},
          {"subprompts", question.subprompts}};
}

nlohmann::json pedagogy_view(const store::PedagogyVersion& v) {
  return {{"version", v.version},
          {"sentence", cnl::to_json(v.sentence)},
          {"canonical", cnl::render_canonical(v.sentence)},
          {"display", cnl::to_json(cnl::render_display(v.sentence))},
          {"grounding", v.grounding}};
}

nlohmann::json candidate_view(const ProjectState& s, const translation::TranslationCandidate& c) {
  auto j = translation::to_json(c);
  j["display"] = cnl::to_json(cnl::render_display(c.game_sentence));
  if (const auto* p = s.current_pedagogy()) {
    auto report = translation::alignment(c, p->sentence);
    j["alignment"] = mapping::to_json(report);
    j["fully_aligned"] = mapping::is_fully_aligned(report);
  }
  j["accepted"] = s.accepted && s.accepted->candidate == c.id && s.accepted->revision == c.revision;
  return j;
}

nlohmann::json artifact_view(const store::StoredArtifact& a) {
  auto j = development::to_json(a.artifact);
  j["event"] = a.event;
  return j;
}

PendingEvent acceptance_cleared(const ProjectState& s, const std::string& reason) {
  return {Actor::Instructor, Action::AcceptanceCleared,
          "candidate:" + s.accepted->candidate + "@" + std::to_string(s.accepted->revision),
          {{"candidate", s.accepted->candidate},
           {"revision", s.accepted->revision},
           {"reason", reason}}};
}

// The sentence at the root of an artifact's parent chain.
cnl::ControlledSentence root_sentence(const ProjectState& s, const ExpansionArtifact& a) {
  const ExpansionArtifact* cur = &a;
  while (cur->parent) {
    const auto* p = s.artifact(*cur->parent);
    if (!p) throw Error(ErrorCode::Internal, "artifact chain is broken at " + cur->id);
    cur = &p->artifact;
  }
  return cnl::parse_sentence(cur->content, cnl::Register::Game);
}

}  // namespace

Workbench::Workbench(store::ProjectStore& store, llm::Gateway gateway, extraction::Catalog catalog)
    : store_(store), gateway_(std::move(gateway)), catalog_(std::move(catalog)) {}

std::string Workbench::create_project() { return store_.create(); }

nlohmann::json Workbench::project(const std::string& id) {
  auto snap = store_.snapshot(id);
  const auto& s = *snap.state;
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : s.candidates) candidates.push_back(candidate_view(s, c));
  nlohmann::json artifacts = nlohmann::json::array();
  for (const auto& a : s.artifacts) artifacts.push_back(artifact_view(a));
  nlohmann::json accepted = nullptr;
  if (s.accepted) accepted = {{"candidate", s.accepted->candidate}, {"revision", s.accepted->revision}};
  const auto* sentence = s.current_sentence();
  auto gate = [&](store::Phase p) -> nlohmann::json {
    auto r = store::phase_gate(s, p);
    return r ? nlohmann::json(*r) : nlohmann::json(nullptr);
  };
  return {{"id", s.id},
          {"phase", std::string(store::to_string(s.phase))},
          {"last_sequence", s.last_sequence},
          {"document", extraction::to_json(s.document)},
          {"question", question_view(extraction::next_question(s.document, catalog_))},
          {"proposed_options", s.proposed_options},
          {"pedagogy", s.current_pedagogy() ? pedagogy_view(*s.current_pedagogy()) : nlohmann::json(nullptr)},
          {"pedagogy_versions", s.pedagogy.size()},
          {"candidates", candidates},
          {"accepted", accepted},
          {"artifacts", artifacts},
          {"current_sentence", sentence ? nlohmann::json(sentence->artifact.id) : nlohmann::json(nullptr)},
          {"chat", s.chat},
          {"gates", {{"translation", gate(store::Phase::Translation)},
                     {"development", gate(store::Phase::Development)}}},
          {"warnings", snap.warnings}};
}

nlohmann::json Workbench::question(const std::string& id) {
  auto snap = store_.snapshot(id);
  return question_view(extraction::next_question(snap.state->document, catalog_));
}

nlohmann::json Workbench::answer(const std::string& id, const std::string& field,
                                 const std::string& text) {
  auto f = parse_field(field);
  auto spec = extraction::specificity_check(f, text, catalog_);
  store_.mutate(id, [&](const ProjectState&) -> std::vector<PendingEvent> {
    return {{Actor::Instructor, Action::AnswerIngested, "field:" + field,
             {{"field", field},
              {"text", text},
              {"specificity", {{"pass", spec.pass}, {"reasons", spec.reasons}}}}}};
  });
  auto snap = store_.snapshot(id);
  return {{"field", field},
          {"specificity", {{"pass", spec.pass}, {"reasons", spec.reasons}}},
          {"document", extraction::to_json(snap.state->document)},
          {"question", question_view(extraction::next_question(snap.state->document, catalog_))}};
}

nlohmann::json Workbench::options(const std::string& id, const std::string& field) {
  auto f = parse_field(field);
  extraction::OptionSet set{f, {}};
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    set = extraction::propose_options(f, s.document, gateway_, catalog_);
    return {{Actor::Assistant, Action::OptionsProposed, "field:" + field,
             {{"field", field}, {"options", set.options}}}};
  });
  return extraction::to_json(set);
}

nlohmann::json Workbench::compose_pedagogy(const std::string& id) {
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    auto sentence = extraction::compose_pedagogy_sentence(s.document, gateway_, catalog_);
    const auto* cur = s.current_pedagogy();
    if (cur && cur->sentence == sentence && cur->grounding == s.answer_events) return {};
    int version = static_cast<int>(s.pedagogy.size()) + 1;
    return {{Actor::Assistant, Action::PedagogySentenceComposed, "pedagogy:" + std::to_string(version),
             {{"version", version},
              {"sentence", cnl::to_json(sentence)},
              {"grounding", s.answer_events}}}};
  });
  auto snap = store_.snapshot(id);
  return pedagogy_view(*snap.state->current_pedagogy());
}

nlohmann::json Workbench::edit_pedagogy_slot(const std::string& id, const std::string& kind,
                                             const std::string& text) {
  auto k = parse_kind(kind);
  bool cleared = false;
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto& cur = require_pedagogy(s);
    auto next = cur.sentence.with_slot(k, text);
    if (next == cur.sentence) return {};
    std::vector<PendingEvent> out;
    int version = static_cast<int>(s.pedagogy.size()) + 1;
    out.push_back({Actor::Instructor, Action::SlotEdited, "pedagogy:" + std::to_string(version),
                   {{"target", "pedagogy"},
                    {"kind", kind},
                    {"text", next.slot(k)},
                    {"version", version},
                    {"parent_version", cur.version}}});
    if (s.accepted) {
      out.push_back(acceptance_cleared(s, "pedagogy " + kind + " edited"));
      cleared = true;
    }
    return out;
  });
  auto snap = store_.snapshot(id);
  return {{"pedagogy", pedagogy_view(*snap.state->current_pedagogy())},
          {"acceptance_cleared", cleared}};
}

nlohmann::json Workbench::generate_candidates(const std::string& id, int n) {
  std::vector<std::string> ids;
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto& ped = require_pedagogy(s);
    auto made = translation::generate_candidates({ped.sentence, ped.version}, n, gateway_,
                                                 static_cast<int>(s.candidates.size()));
    std::vector<PendingEvent> out;
    ids.clear();
    auto next = s.candidates.size() + 1;
    for (auto& c : made) {
      c.id = "c" + std::to_string(next++);
      ids.push_back(c.id);
      out.push_back({Actor::Assistant, Action::CandidateGenerated, "candidate:" + c.id + "@1",
                     {{"candidate", translation::to_json(c)}}});
    }
    return out;
  });
  auto snap = store_.snapshot(id);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& cid : ids) list.push_back(candidate_view(*snap.state, *snap.state->candidate(cid)));
  return {{"candidates", list}};
}

nlohmann::json Workbench::author_candidate(const std::string& id, const nlohmann::json& body) {
  if (!body.contains("sentence")) throw Error(ErrorCode::Validation, "'sentence' is required");
  const auto& sj = body["sentence"];
  auto game = sj.is_string() ? cnl::parse_sentence(sj.get<std::string>(), cnl::Register::Game)
                             : cnl::sentence_from_json(sj);
  std::vector<std::pair<cnl::SlotKind, std::string>> why;
  if (body.contains("rationales")) {
    const auto& rj = body["rationales"];
    if (rj.is_object()) {
      for (const auto& [k, v] : rj.items()) why.emplace_back(parse_kind(k), v.get<std::string>());
    } else if (rj.is_array()) {
      for (const auto& r : rj) {
        why.emplace_back(parse_kind(r.at("kind").get<std::string>()),
                         r.at("explanation").get<std::string>());
      }
    } else {
      throw Error(ErrorCode::Validation, "'rationales' must be an object or an array");
    }
  }
  std::string cid;
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto& ped = require_pedagogy(s);
    auto c = translation::author_candidate(game, why, {ped.sentence, ped.version});
    c.id = s.next_candidate_id();
    cid = c.id;
    return {{Actor::Instructor, Action::CandidateGenerated, "candidate:" + c.id + "@1",
             {{"candidate", translation::to_json(c)}}}};
  });
  auto snap = store_.snapshot(id);
  return candidate_view(*snap.state, *snap.state->candidate(cid));
}

nlohmann::json Workbench::regenerate_slot(const std::string& id, const std::string& cid,
                                          const std::string& kind) {
  auto k = parse_kind(kind);
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto& c = require_candidate(s, cid);
    const auto& ped = require_pedagogy(s);
    auto next = translation::regenerate_slot(c, k, {ped.sentence, ped.version}, gateway_);
    std::vector<PendingEvent> out;
    out.push_back({Actor::Assistant, Action::SlotRegenerated,
                   "candidate:" + cid + "@" + std::to_string(next.revision),
                   {{"kind", kind}, {"candidate", translation::to_json(next)}}});
    if (s.accepted && s.accepted->candidate == cid) {
      out.push_back(acceptance_cleared(s, "accepted candidate " + kind + " regenerated"));
    }
    return out;
  });
  auto snap = store_.snapshot(id);
  return candidate_view(*snap.state, *snap.state->candidate(cid));
}

nlohmann::json Workbench::edit_candidate_slot(const std::string& id, const std::string& cid,
                                              const std::string& kind, const std::string& text,
                                              const std::optional<std::string>& rationale) {
  auto k = parse_kind(kind);
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto& c = require_candidate(s, cid);
    const auto& ped = require_pedagogy(s);
    auto next = translation::edit_slot(c, k, text, rationale, {ped.sentence, ped.version});
    std::vector<PendingEvent> out;
    out.push_back({Actor::Instructor, Action::SlotEdited,
                   "candidate:" + cid + "@" + std::to_string(next.revision),
                   {{"target", "candidate"}, {"kind", kind}, {"candidate", translation::to_json(next)}}});
    if (s.accepted && s.accepted->candidate == cid) {
      out.push_back(acceptance_cleared(s, "accepted candidate " + kind + " edited"));
    }
    return out;
  });
  auto snap = store_.snapshot(id);
  return candidate_view(*snap.state, *snap.state->candidate(cid));
}

nlohmann::json Workbench::accept(const std::string& id, const std::string& cid) {
  bool already = false;
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto& ped = require_pedagogy(s);
    const auto& c = require_candidate(s, cid);
    if (s.accepted && s.accepted->candidate == cid && s.accepted->revision == c.revision) {
      already = true;
      return {};
    }
    translation::accept_candidate(s.candidate_set(), cid, ped.sentence);
    ExpansionArtifact a;
    a.id = s.next_artifact_id();
    a.level = ExpansionLevel::Sentence;
    a.content = cnl::render_canonical(c.game_sentence);
    a.source_candidate = cid;
    a.source_revision = c.revision;
    a.version = s.next_artifact_version(ExpansionLevel::Sentence);
    return {{Actor::Instructor, Action::CandidateAccepted,
             "candidate:" + cid + "@" + std::to_string(c.revision),
             {{"candidate", cid}, {"revision", c.revision}, {"artifact", development::to_json(a)}}}};
  });
  auto snap = store_.snapshot(id);
  const auto& s = *snap.state;
  return {{"accepted", {{"candidate", s.accepted->candidate}, {"revision", s.accepted->revision}}},
          {"already_accepted", already},
          {"artifact", artifact_view(*s.current_sentence())}};
}

nlohmann::json Workbench::refine(const std::string& id, const std::string& instruction) {
  std::string new_id;
  nlohmann::json diff = nlohmann::json::array();
  std::vector<std::string> outdated;
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    if (!s.accepted) {
      throw Error(ErrorCode::NoAcceptedCandidate, "accept a candidate before refining");
    }
    const auto& ped = require_pedagogy(s);
    const auto* rev = s.candidate_revision(s.accepted->candidate, s.accepted->revision);
    const auto* cur = s.current_sentence();
    if (!rev || !cur) throw Error(ErrorCode::Internal, "accepted candidate has no sentence artifact");
    auto current = cnl::parse_sentence(cur->artifact.content, cnl::Register::Game);
    development::RefinementContext ctx{s.document, ped.sentence, rev->candidate, current, s.chat};
    auto next = development::refine_sentence(ctx, instruction, gateway_);
    diff = nlohmann::json::array();
    for (auto k : cnl::diff_sentences(current, next).changed_kinds()) diff.push_back(kind_token(k));
    ExpansionArtifact a;
    a.id = s.next_artifact_id();
    a.level = ExpansionLevel::Sentence;
    a.content = cnl::render_canonical(next);
    a.derived_from = cur->artifact.id;
    a.source_candidate = cur->artifact.source_candidate;
    a.source_revision = cur->artifact.source_revision;
    a.version = s.next_artifact_version(ExpansionLevel::Sentence);
    new_id = a.id;
    outdated.clear();
    for (const auto& other : s.artifacts) {
      if (!other.artifact.outdated) outdated.push_back(other.artifact.id);
    }
    std::string ins(text::trim(instruction));
    return {{Actor::Assistant, Action::SentenceRefined, "artifact:" + a.id,
             {{"instruction", ins}, {"artifact", development::to_json(a)}}}};
  });
  auto snap = store_.snapshot(id);
  const auto* a = snap.state->artifact(new_id);
  auto sentence = cnl::parse_sentence(a->artifact.content, cnl::Register::Game);
  return {{"artifact", artifact_view(*a)},
          {"sentence", cnl::to_json(sentence)},
          {"display", cnl::to_json(cnl::render_display(sentence))},
          {"changed", diff},
          {"outdated", outdated}};
}

nlohmann::json Workbench::zoom(const std::string& id, const std::string& aid) {
  std::string new_id;
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    const auto* from = s.artifact(aid);
    if (!from) throw Error(ErrorCode::NotFound, "no artifact '" + aid + "'", {{"artifact", aid}});
    if (from->artifact.level == ExpansionLevel::Pseudocode) {
      throw Error(ErrorCode::MaxDepth, "pseudocode is the last level", {{"artifact", aid}});
    }
    if (from->artifact.outdated) {
      throw Error(ErrorCode::OutdatedArtifact,
                  "artifact '" + aid + "' is outdated; zoom from the newest version",
                  {{"artifact", aid}});
    }
    auto game = root_sentence(s, from->artifact);
    auto next = development::zoom_in(from->artifact, game, gateway_);
    next.id = s.next_artifact_id();
    next.version = s.next_artifact_version(next.level);
    new_id = next.id;
    return {{Actor::Assistant, Action::ArtifactZoomed, "artifact:" + next.id,
             {{"artifact", development::to_json(next)}}}};
  });
  auto snap = store_.snapshot(id);
  const auto* a = snap.state->artifact(new_id);
  auto j = artifact_view(*a);
  if (a->artifact.level == ExpansionLevel::Pseudocode) {
    auto check = development::validate_pseudocode(a->artifact.content);
    j["format_check"] = {{"pass", check.pass}, {"reasons", check.reasons}};
  }
  return j;
}

std::string Workbench::export_artifact(const std::string& id, const std::string& aid) {
  auto snap = store_.snapshot(id);
  const auto* a = snap.state->artifact(aid);
  if (!a) throw Error(ErrorCode::NotFound, "no artifact '" + aid + "'", {{"artifact", aid}});
  auto content = a->artifact.content;
  if (content.empty() || content.back() != '\n') content += '\n';
  return content;
}

nlohmann::json Workbench::advance_phase(const std::string& id, const std::string& target) {
  auto to = store::phase_from_string(target);
  if (!to) {
    throw Error(ErrorCode::Validation, "unknown phase '" + target + "'",
                {{"phase", target}, {"expected", {"extraction", "translation", "development"}}});
  }
  store_.mutate(id, [&](const ProjectState& s) -> std::vector<PendingEvent> {
    if (s.phase == *to) return {};
    if (auto reason = store::phase_gate(s, *to)) {
      throw Error(ErrorCode::GateNotSatisfied, "cannot enter " + target + ": " + *reason,
                  {{"target", target}, {"reason", *reason}});
    }
    return {{Actor::Instructor, Action::PhaseAdvanced, "phase",
             {{"from", std::string(store::to_string(s.phase))}, {"to", target}}}};
  });
  auto snap = store_.snapshot(id);
  return {{"phase", std::string(store::to_string(snap.state->phase))}};
}

nlohmann::json Workbench::trace(const std::string& id, const std::string& ref) {
  auto snap = store_.snapshot(id);
  auto chain = store::trace(*snap.state, *snap.log, ref);
  nlohmann::json links = nlohmann::json::array();
  std::size_t answers = 0;
  for (const auto& l : chain) {
    links.push_back(store::to_json(l));
    if (l.action == Action::AnswerIngested) ++answers;
  }
  return {{"ref", ref}, {"chain", links}, {"length", chain.size()}, {"answer_events", answers}};
}

nlohmann::json Workbench::events(const std::string& id, std::int64_t since) {
  auto snap = store_.snapshot(id);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : *snap.log) {
    if (e.sequence > since) list.push_back(store::to_json(e));
  }
  return {{"events", list}, {"last_sequence", snap.state->last_sequence}};
}

}  // namespace pedforge::service

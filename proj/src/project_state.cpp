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

#include <algorithm>
#include <charconv>

#include "pedforge/error.hpp"
#include "pedforge/store.hpp"

namespace pedforge::store {

namespace {

using development::ExpansionLevel;

[[noreturn]] void corrupt(const ProjectEvent& e, const std::string& why) {
  throw Error(ErrorCode::CorruptFile,
              "event " + std::to_string(e.sequence) + " (" + std::string(to_string(e.action)) +
                  "): " + why,
              {{"sequence", e.sequence}});
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

extraction::RequirementField field_of(const ProjectEvent& e) {
  auto f = extraction::field_from_string(e.payload.at("field").get<std::string>());
  if (!f) corrupt(e, "unknown field");
  return *f;
}

cnl::SlotKind kind_of(const ProjectEvent& e) {
  auto k = cnl::slot_kind_from_string(e.payload.at("kind").get<std::string>());
  if (!k) corrupt(e, "unknown slot kind");
  return *k;
}

void store_revision(ProjectState& s, translation::TranslationCandidate c, std::int64_t seq) {
  s.candidate_history.push_back({c, seq});
  for (auto& cur : s.candidates) {
    if (cur.id == c.id) {
      cur = std::move(c);
      return;
    }
  }
  s.candidates.push_back(std::move(c));
}

void outdate_from(ProjectState& s, ExpansionLevel level) {
  for (auto& a : s.artifacts) {
    if (a.artifact.level >= level) a.artifact.outdated = true;
  }
}

void apply_inner(ProjectState& s, const ProjectEvent& e) {
  const auto& p = e.payload;
  switch (e.action) {
    case Action::AnswerIngested: {
      auto f = field_of(e);
      const auto& sp = p.at("specificity");
      s.document = s.document.with_answer(
          f, p.at("text").get<std::string>(),
          {sp.at("pass").get<bool>(), sp.at("reasons").get<std::vector<std::string>>()});
      s.answer_events[extraction::index_of(f)] = e.sequence;
      break;
    }
    case Action::OptionsProposed:
      s.proposed_options[std::string(extraction::to_string(field_of(e)))] =
          p.at("options").get<std::vector<std::string>>();
      break;
    case Action::PedagogySentenceComposed: {
      int version = p.at("version").get<int>();
      if (version != static_cast<int>(s.pedagogy.size()) + 1) corrupt(e, "pedagogy version gap");
      auto grounding = p.at("grounding").get<std::vector<std::int64_t>>();
      if (grounding.size() != 5) corrupt(e, "grounding must name five answers");
      PedagogyVersion v{version, cnl::sentence_from_json(p.at("sentence")), std::nullopt, {}, e.sequence};
      std::copy(grounding.begin(), grounding.end(), v.grounding.begin());
      s.pedagogy.push_back(std::move(v));
      break;
    }
    case Action::CandidateGenerated: {
      auto c = translation::candidate_from_json(p.at("candidate"));
      if (s.candidate(c.id)) corrupt(e, "candidate id reused");
      store_revision(s, std::move(c), e.sequence);
      break;
    }
    case Action::SlotEdited: {
      auto target = p.at("target").get<std::string>();
      if (target == "pedagogy") {
        const auto* cur = s.current_pedagogy();
        if (!cur) corrupt(e, "no pedagogy sentence to edit");
        int version = p.at("version").get<int>();
        if (version != cur->version + 1) corrupt(e, "pedagogy version gap");
        PedagogyVersion v{version, cur->sentence.with_slot(kind_of(e), p.at("text").get<std::string>()),
                          cur->version, cur->grounding, e.sequence};
        s.pedagogy.push_back(std::move(v));
      } else if (target == "candidate") {
        auto c = translation::candidate_from_json(p.at("candidate"));
        if (!s.candidate(c.id)) corrupt(e, "edit of unknown candidate");
        store_revision(s, std::move(c), e.sequence);
      } else {
        corrupt(e, "unknown edit target");
      }
      break;
    }
    case Action::SlotRegenerated: {
      auto c = translation::candidate_from_json(p.at("candidate"));
      if (!s.candidate(c.id)) corrupt(e, "regeneration of unknown candidate");
      store_revision(s, std::move(c), e.sequence);
      break;
    }
    case Action::CandidateAccepted: {
      AcceptedRef ref{p.at("candidate").get<std::string>(), p.at("revision").get<int>()};
      if (!s.candidate_revision(ref.candidate, ref.revision)) corrupt(e, "unknown candidate revision");
      s.accepted = ref;
      outdate_from(s, ExpansionLevel::Sentence);
      s.artifacts.push_back({development::artifact_from_json(p.at("artifact")), e.sequence});
      break;
    }
    case Action::AcceptanceCleared:
      s.accepted.reset();
      outdate_from(s, ExpansionLevel::Sentence);
      break;
    case Action::SentenceRefined:
      outdate_from(s, ExpansionLevel::Sentence);
      s.chat.push_back(p.at("instruction").get<std::string>());
      s.artifacts.push_back({development::artifact_from_json(p.at("artifact")), e.sequence});
      break;
    case Action::ArtifactZoomed: {
      auto a = development::artifact_from_json(p.at("artifact"));
      if (!a.parent || !s.artifact(*a.parent)) corrupt(e, "zoom without a stored parent");
      outdate_from(s, a.level);
      s.artifacts.push_back({std::move(a), e.sequence});
      break;
    }
    case Action::PhaseAdvanced: {
      auto to = phase_from_string(p.at("to").get<std::string>());
      if (!to) corrupt(e, "unknown phase");
      s.phase = *to;
      break;
    }
  }
}

}  // namespace

const PedagogyVersion* ProjectState::current_pedagogy() const {
  return pedagogy.empty() ? nullptr : &pedagogy.back();
}

const translation::TranslationCandidate* ProjectState::candidate(std::string_view cid) const {
  for (const auto& c : candidates) {
    if (c.id == cid) return &c;
  }
  return nullptr;
}

const CandidateRevision* ProjectState::candidate_revision(std::string_view cid, int revision) const {
  for (const auto& r : candidate_history) {
    if (r.candidate.id == cid && r.candidate.revision == revision) return &r;
  }
  return nullptr;
}

const StoredArtifact* ProjectState::artifact(std::string_view aid) const {
  for (const auto& a : artifacts) {
    if (a.artifact.id == aid) return &a;
  }
  return nullptr;
}

const StoredArtifact* ProjectState::current_sentence() const {
  for (auto it = artifacts.rbegin(); it != artifacts.rend(); ++it) {
    if (it->artifact.level == ExpansionLevel::Sentence && !it->artifact.outdated) return &*it;
  }
  return nullptr;
}

translation::CandidateSet ProjectState::candidate_set() const {
  translation::CandidateSet set;
  set.pedagogy_version = pedagogy.empty() ? 0 : pedagogy.back().version;
  set.candidates = candidates;
  if (accepted) set.accepted = accepted->candidate;
  return set;
}

std::string ProjectState::next_candidate_id() const {
  return "c" + std::to_string(candidates.size() + 1);
}

std::string ProjectState::next_artifact_id() const {
  return "a" + std::to_string(artifacts.size() + 1);
}

int ProjectState::next_artifact_version(ExpansionLevel level) const {
  return 1 + static_cast<int>(std::count_if(artifacts.begin(), artifacts.end(), [&](const auto& a) {
           return a.artifact.level == level;
         }));
}

void apply(ProjectState& state, const ProjectEvent& event) {
  if (event.sequence != state.last_sequence + 1) {
    corrupt(event, "expected sequence " + std::to_string(state.last_sequence + 1));
  }
  try {
    apply_inner(state, event);
  } catch (const nlohmann::json::exception& ex) {
    corrupt(event, ex.what());
  } catch (const Error& err) {
    if (err.code() == ErrorCode::CorruptFile) throw;
    corrupt(event, err.what());
  }
  state.last_sequence = event.sequence;
}

ProjectState replay(const std::string& id, const std::vector<ProjectEvent>& log) {
  ProjectState s;
  s.id = id;
  for (const auto& e : log) apply(s, e);
  return s;
}

nlohmann::json to_json(const ProjectState& s) {
  nlohmann::json answers = nlohmann::json::object();
  for (auto f : extraction::kFields) {
    auto seq = s.answer_events[extraction::index_of(f)];
    answers[std::string(extraction::to_string(f))] = seq ? nlohmann::json(seq) : nlohmann::json(nullptr);
  }
  nlohmann::json pedagogy = nlohmann::json::array();
  for (const auto& v : s.pedagogy) {
    pedagogy.push_back({{"version", v.version},
                        {"sentence", cnl::to_json(v.sentence)},
                        {"canonical", cnl::render_canonical(v.sentence)},
                        {"parent_version", v.parent_version ? nlohmann::json(*v.parent_version)
                                                            : nlohmann::json(nullptr)},
                        {"grounding", v.grounding},
                        {"event", v.event}});
  }
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : s.candidates) candidates.push_back(translation::to_json(c));
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : s.candidate_history) {
    history.push_back({{"id", r.candidate.id}, {"revision", r.candidate.revision}, {"event", r.event}});
  }
  nlohmann::json artifacts = nlohmann::json::array();
  for (const auto& a : s.artifacts) {
    auto j = development::to_json(a.artifact);
    j["event"] = a.event;
    artifacts.push_back(std::move(j));
  }
  nlohmann::json accepted = nullptr;
  if (s.accepted) accepted = {{"candidate", s.accepted->candidate}, {"revision", s.accepted->revision}};
  return {{"id", s.id},
          {"last_sequence", s.last_sequence},
          {"phase", std::string(to_string(s.phase))},
          {"document", extraction::to_json(s.document)},
          {"answer_events", answers},
          {"proposed_options", s.proposed_options},
          {"pedagogy", pedagogy},
          {"candidates", candidates},
          {"candidate_history", history},
          {"accepted", accepted},
          {"artifacts", artifacts},
          {"chat", s.chat}};
}

std::optional<std::string> phase_gate(const ProjectState& s, Phase target) {
  if (target <= s.phase) return std::nullopt;
  if (target == Phase::Translation || target == Phase::Development) {
    if (!s.document.complete()) return "requirement document is not complete";
  }
  if (target == Phase::Development && !s.accepted) return "no candidate has been accepted";
  return std::nullopt;
}

nlohmann::json to_json(const TraceLink& l) {
  return {{"ref", l.ref}, {"sequence", l.sequence}, {"action", std::string(to_string(l.action))}};
}

std::vector<TraceLink> trace(const ProjectState& s, const std::vector<ProjectEvent>& log,
                             std::string_view ref) {
  auto not_found = [&](std::string_view r) {
    return Error(ErrorCode::NotFound, "no such reference '" + std::string(r) + "'",
                 {{"ref", std::string(r)}});
  };
  auto action_at = [&](std::int64_t seq, std::string_view r) {
    if (seq < 1 || seq > static_cast<std::int64_t>(log.size())) throw not_found(r);
    return log[static_cast<std::size_t>(seq - 1)].action;
  };

  std::vector<TraceLink> chain;
  std::string cur(ref);
  // Every step strictly moves to an older event, so the walk terminates.
  while (!cur.empty()) {
    auto colon = cur.find(':');
    if (colon == std::string::npos) throw not_found(cur);
    auto kind = cur.substr(0, colon);
    auto key = cur.substr(colon + 1);
    std::string next;

    if (kind == "answer") {
      auto seq = parse_int(key);
      if (!seq || action_at(*seq, cur) != Action::AnswerIngested) throw not_found(cur);
      chain.push_back({cur, *seq, Action::AnswerIngested});
    } else if (kind == "field") {
      auto f = extraction::field_from_string(key);
      if (!f || s.answer_events[extraction::index_of(*f)] == 0) throw not_found(cur);
      auto seq = s.answer_events[extraction::index_of(*f)];
      chain.push_back({"answer:" + std::to_string(seq), seq, Action::AnswerIngested});
    } else if (kind == "pedagogy") {
      auto v = parse_int(key);
      if (!v || *v < 1 || *v > static_cast<std::int64_t>(s.pedagogy.size())) throw not_found(cur);
      const auto& pv = s.pedagogy[static_cast<std::size_t>(*v - 1)];
      chain.push_back({cur, pv.event, action_at(pv.event, cur)});
      if (pv.parent_version) {
        next = "pedagogy:" + std::to_string(*pv.parent_version);
      } else {
        for (auto seq : pv.grounding) {
          chain.push_back({"answer:" + std::to_string(seq), seq, action_at(seq, cur)});
        }
      }
    } else if (kind == "candidate") {
      auto at = key.find('@');
      std::string cid = key.substr(0, at);
      const CandidateRevision* rev = nullptr;
      if (at == std::string::npos) {
        const auto* c = s.candidate(cid);
        if (c) rev = s.candidate_revision(cid, c->revision);
      } else {
        auto r = parse_int(std::string_view(key).substr(at + 1));
        if (r) rev = s.candidate_revision(cid, static_cast<int>(*r));
      }
      if (!rev) throw not_found(cur);
      chain.push_back({cid + "@" + std::to_string(rev->candidate.revision), rev->event,
                       action_at(rev->event, cur)});
      chain.back().ref = "candidate:" + chain.back().ref;
      next = "pedagogy:" + std::to_string(rev->candidate.source_pedagogy_version);
    } else if (kind == "artifact") {
      const auto* a = s.artifact(key);
      if (!a) throw not_found(cur);
      chain.push_back({cur, a->event, action_at(a->event, cur)});
      if (a->artifact.parent) {
        next = "artifact:" + *a->artifact.parent;
      } else if (a->artifact.derived_from) {
        next = "artifact:" + *a->artifact.derived_from;
      } else {
        next = "candidate:" + a->artifact.source_candidate + "@" +
               std::to_string(a->artifact.source_revision);
      }
    } else {
      throw not_found(cur);
    }
    cur = std::move(next);
  }
  return chain;
}

}  // namespace pedforge::store

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

// Event-sourced project state. The event log is the source of truth; a
// ProjectState is always fold(apply, log) and the snapshot written next to
// the log is only a cache.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pedforge/cnl.hpp"
#include "pedforge/development.hpp"
#include "pedforge/extraction.hpp"
#include "pedforge/translation.hpp"

namespace pedforge::store {

inline constexpr std::string_view kFormat = "pedforge/1";

enum class Actor { Instructor, Assistant };

enum class Action {
  AnswerIngested,
  OptionsProposed,
  PedagogySentenceComposed,
  CandidateGenerated,
  SlotEdited,
  SlotRegenerated,
  CandidateAccepted,
  AcceptanceCleared,
  SentenceRefined,
  ArtifactZoomed,
  PhaseAdvanced,
};

std::string_view to_string(Actor a);
std::string_view to_string(Action a);
std::optional<Action> action_from_string(std::string_view s);

struct ProjectEvent {
  std::int64_t sequence = 0;
  std::string timestamp;  // UTC, ISO 8601; not part of replay equality
  Actor actor = Actor::Instructor;
  Action action = Action::AnswerIngested;
  std::string subject;    // reference such as "field:materials" or "candidate:c2@3"
  nlohmann::json payload;
};

nlohmann::json to_json(const ProjectEvent& e);
/// Throws Error(CorruptFile) on a malformed event.
ProjectEvent event_from_json(const nlohmann::json& j);

/// An event before the store stamps sequence and timestamp.
struct PendingEvent {
  Actor actor;
  Action action;
  std::string subject;
  nlohmann::json payload;
};

enum class Phase { Extraction, Translation, Development };

std::string_view to_string(Phase p);
std::optional<Phase> phase_from_string(std::string_view s);

struct PedagogyVersion {
  int version = 0;
  cnl::ControlledSentence sentence;
  std::optional<int> parent_version;          // set for slot edits
  std::array<std::int64_t, 5> grounding{};    // answer events, in field order
  std::int64_t event = 0;
};

struct CandidateRevision {
  translation::TranslationCandidate candidate;
  std::int64_t event = 0;
};

struct StoredArtifact {
  development::ExpansionArtifact artifact;
  std::int64_t event = 0;
};

struct AcceptedRef {
  std::string candidate;
  int revision = 0;
};

struct ProjectState {
  std::string id;
  std::int64_t last_sequence = 0;
  Phase phase = Phase::Extraction;
  extraction::RequirementDocument document;
  std::array<std::int64_t, 5> answer_events{};  // latest answer per field, 0 if none
  std::map<std::string, std::vector<std::string>> proposed_options;
  std::vector<PedagogyVersion> pedagogy;        // ascending version
  std::vector<translation::TranslationCandidate> candidates;  // current revisions
  std::vector<CandidateRevision> candidate_history;           // every revision
  std::optional<AcceptedRef> accepted;
  std::vector<StoredArtifact> artifacts;
  std::vector<std::string> chat;                // refinement instructions, in order

  const PedagogyVersion* current_pedagogy() const;
  const translation::TranslationCandidate* candidate(std::string_view id) const;
  const CandidateRevision* candidate_revision(std::string_view id, int revision) const;
  const StoredArtifact* artifact(std::string_view id) const;
  /// Newest sentence artifact that is not outdated.
  const StoredArtifact* current_sentence() const;
  translation::CandidateSet candidate_set() const;

  std::string next_candidate_id() const;
  std::string next_artifact_id() const;
  int next_artifact_version(development::ExpansionLevel level) const;
};

/// Applies one event. Throws Error(CorruptFile) when the event does not fit
/// the state it is applied to.
void apply(ProjectState& state, const ProjectEvent& event);
ProjectState replay(const std::string& id, const std::vector<ProjectEvent>& log);

/// Canonical snapshot. Two states are equal iff their snapshots are equal.
nlohmann::json to_json(const ProjectState& s);

/// Gate for moving to `target`; nullopt when open, otherwise the reason.
/// Backward moves are always open.
std::optional<std::string> phase_gate(const ProjectState& s, Phase target);

struct TraceLink {
  std::string ref;
  std::int64_t sequence = 0;
  Action action = Action::AnswerIngested;
};

/// From `ref` back to the answers that ground it. Accepted ref forms:
/// answer:<seq>, field:<name>, pedagogy:<version>, candidate:<id>[@<rev>],
/// artifact:<id>. Throws Error(NotFound).
std::vector<TraceLink> trace(const ProjectState& s, const std::vector<ProjectEvent>& log,
                             std::string_view ref);

nlohmann::json to_json(const TraceLink& l);

// ---- project file ----------------------------------------------------------

struct ProjectFile {
  std::string id;
  std::string created;
  std::vector<ProjectEvent> events;
};

struct LoadedProject {
  ProjectFile file;
  ProjectState state;
  std::vector<std::string> warnings;
};

/// {"format", "project", "created", "event_count", "events", "snapshot"},
/// two-space indented with a trailing newline.
std::string serialize_project(const ProjectFile& file, const ProjectState& state);

/// Checks the header, the event count and gapless sequences, then replays.
/// A snapshot that disagrees with the replay is reported as a warning and
/// ignored. Throws Error(CorruptFile).
LoadedProject parse_project(std::string_view text);

/// Atomic replace: temporary file, fsync, rename. Throws Error(StorageFailure).
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace pedforge::store

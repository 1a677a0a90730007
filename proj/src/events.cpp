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

#include <array>

#include "pedforge/error.hpp"
#include "pedforge/store.hpp"

namespace pedforge::store {

namespace {

constexpr std::array<std::string_view, 11> kActionNames = {
    "AnswerIngested",  "OptionsProposed",   "PedagogySentenceComposed",
    "CandidateGenerated", "SlotEdited",     "SlotRegenerated",
    "CandidateAccepted", "AcceptanceCleared", "SentenceRefined",
    "ArtifactZoomed",  "PhaseAdvanced"};

constexpr std::array<std::string_view, 3> kPhaseNames = {"extraction", "translation",
                                                         "development"};

}  // namespace

std::string_view to_string(Actor a) {
  return a == Actor::Instructor ? "instructor" : "assistant";
}

std::string_view to_string(Action a) { return kActionNames[static_cast<std::size_t>(a)]; }

std::optional<Action> action_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == s) return static_cast<Action>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Phase p) { return kPhaseNames[static_cast<std::size_t>(p)]; }

std::optional<Phase> phase_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == s) return static_cast<Phase>(i);
  }
  return std::nullopt;
}

nlohmann::json to_json(const ProjectEvent& e) {
  return {{"sequence", e.sequence},
          {"timestamp", e.timestamp},
          {"actor", std::string(to_string(e.actor))},
          {"action", std::string(to_string(e.action))},
          {"subject", e.subject},
          {"payload", e.payload}};
}

ProjectEvent event_from_json(const nlohmann::json& j) {
  try {
    ProjectEvent e;
    e.sequence = j.at("sequence").get<std::int64_t>();
    e.timestamp = j.at("timestamp").get<std::string>();
    auto actor = j.at("actor").get<std::string>();
    if (actor != "instructor" && actor != "assistant") {
      throw Error(ErrorCode::CorruptFile, "unknown actor '" + actor + "'");
    }
    e.actor = actor == "instructor" ? Actor::Instructor : Actor::Assistant;
    auto action = action_from_string(j.at("action").get<std::string>());
    if (!action) throw Error(ErrorCode::CorruptFile, "unknown event action");
    e.action = *action;
    e.subject = j.at("subject").get<std::string>();
    e.payload = j.at("payload");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::CorruptFile, std::string("malformed event: ") + ex.what());
  }
}

}  // namespace pedforge::store

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

// Shared fixtures for the unit tests and the acceptance runner.

#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pedforge/cnl.hpp"
#include "pedforge/error.hpp"
#include "pedforge/extraction.hpp"

namespace pedforge::test {

/// Code of the Error thrown by `f`, or nullopt when it returns normally.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct TableRow {
  cnl::SlotKind kind;
  const char* element;
  const char* teaching;
  const char* game;
};

/// The published mapping table, transcribed by hand.
inline std::vector<TableRow> table1() {
  return {
      {cnl::SlotKind::Adverb, "Adverb", "Specifies performance requirements for the targeted ability.",
       "Rules and parameters that configure difficulty and success conditions."},
      {cnl::SlotKind::Verb, "Verbs", "Expresses the targeted teaching ability as an observable action.",
       "Game mechanics that define the primary player action and interaction pattern."},
      {cnl::SlotKind::Noun, "Nouns", "Denotes the focal teaching concept or content domain.",
       "Content models and in-game artifacts that instantiate the concept."},
      {cnl::SlotKind::Adjective, "Adjectives",
       "Characterizes the learning context, realism level, and instructional tone.",
       "Aesthetic and contextual profiles that define the game world and framing."},
  };
}

struct RejectionCase {
  std::string surface;
  cnl::ParseErrorKind kind;
  std::optional<cnl::SlotKind> slot;
};

inline std::vector<RejectionCase> rejection_cases() {
  using K = cnl::ParseErrorKind;
  using S = cnl::SlotKind;
  const std::string tail = " in a [realistic fieldwork] environment.";
  return {
      {"", K::MalformedFrame, {}},
      {"Players (Students) [classify] [rock samples] in a [realistic] environment.", K::MissingSlot, S::Adverb},
      {"Players (Students) in a [realistic fieldwork] environment.", K::MissingSlot, S::Adverb},
      {"Players (Students) [accurately] [classify] [rock samples] in a environment.", K::MissingSlot, S::Adjective},
      {"Players (Students) [] [classify] [rock samples]" + tail, K::MissingSlot, S::Adverb},
      {"Players (Students) [accurately] [ ] [rock samples]" + tail, K::MissingSlot, S::Verb},
      {"Players (Students) [accurately] [classify] [   ]" + tail, K::MissingSlot, S::Noun},
      {"Players (Students) [accurately] [classify] [rock samples] in a [] environment.", K::MissingSlot, S::Adjective},
      {"Players (Students) [accurately [fast]] [classify] [rock samples]" + tail, K::NestedBracket, {}},
      {"Players (Students) [accurately] [classify [x] now] [rock samples]" + tail, K::NestedBracket, {}},
      {"Players (Students) [accurately] [classify] [rock samples in a [realistic fieldwork] environment.",
       K::NestedBracket, {}},
      {"Players (Students) [accurately] [classify] [rock samples] in a [realistic fieldwork environment.",
       K::MalformedFrame, {}},
      {"Players (Students) accurately] [classify] [rock samples]" + tail, K::MalformedFrame, {}},
      {"Students [accurately] [classify] [rock samples]" + tail, K::MalformedFrame, {}},
      {"Players [accurately] [classify] [rock samples]" + tail, K::MalformedFrame, {}},
      {"players (Students) [accurately] [classify] [rock samples]" + tail, K::MalformedFrame, {}},
      {"Players (Students) [accurately] [classify] [rock samples] in the [realistic fieldwork] environment.",
       K::MalformedFrame, {}},
      {"Players (Students) [accurately] [classify] [rock samples] in a [realistic fieldwork] world.",
       K::MalformedFrame, {}},
      {"Players (Students) [accurately] [classify] [rock samples]" + tail + "\nPlayers (Students)",
       K::MalformedFrame, {}},
      {"Note: Players (Students) [accurately] [classify] [rock samples]" + tail, K::ExtraMaterial, {}},
      {"Players (Students) quickly [accurately] [classify] [rock samples]" + tail, K::ExtraMaterial, {}},
      {"Players (Students) [bonus] [accurately] [classify] [rock samples]" + tail, K::ExtraMaterial, {}},
      {"Players (Students) [accurately] [classify] [rock samples] in a [realistic fieldwork] [windy] environment.",
       K::ExtraMaterial, {}},
      {"Players (Students) [accurately] [classify] [rock samples] in a very [realistic fieldwork] environment.",
       K::ExtraMaterial, {}},
      {"Players (Students) [accurately] [classify] [rock samples]" + tail + " Have fun!", K::ExtraMaterial, {}},
  };
}

/// A random valid sentence and the canonical text it must render to,
/// assembled independently of the renderer.
template <class Rng>
std::pair<cnl::ControlledSentence, std::string> random_sentence(Rng& rng) {
  static const std::vector<std::string> vocab = {
      "accurately", "8",        "of",     "10",        "within",     "15",       "minutes,",
      "sort",       "classify", "rock",   "samples",   "fractions",  "kitchen",  "neon",
      "in",         "a",        "Players", "(Students)", "environment", "environment.", ".",
      "50%",        "x-y",      "(draft)", "élan",       "naïve",      "\"quoted\"", "a/b",
      "world",      "timed",    "quest",  "lab,",       ";",          "#3",       "...",
  };
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<int> coin(0, 3);
  std::array<std::string, 4> slots;
  for (auto& s : slots) {
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      if (i > 0) s += coin(rng) == 0 ? "  " : " ";
      s += vocab[pick(rng)];
    }
  }
  auto reg = coin(rng) % 2 == 0 ? cnl::Register::Teaching : cnl::Register::Game;
  std::string text = "Players (Students) [" + slots[0] + "] [" + slots[1] + "] [" + slots[2] +
                     "] in a [" + slots[3] + "] environment.";
  return {cnl::ControlledSentence(reg, slots), text};
}

struct ScriptedAnswer {
  extraction::RequirementField field;
  std::string text;
};

/// Five answers that all pass the specificity rules, in question order.
inline std::vector<ScriptedAnswer> passing_answers() {
  using F = extraction::RequirementField;
  return {
      {F::ConceptScope, "fraction equivalence for fourth graders"},
      {F::Materials, "fraction strips and a printed worksheet"},
      {F::ObservableAction, "solve matching problems"},
      {F::PerformanceTarget, "accurately solve 8 of 10 matching problems within 15 minutes"},
      {F::Context, "environment: kitchen; realism: Stylized; tone: playful"},
  };
}

inline extraction::RequirementDocument complete_document() {
  extraction::RequirementDocument doc;
  for (const auto& a : passing_answers()) doc = extraction::ingest_answer(doc, a.field, a.text);
  return doc;
}

inline const char* kComposedExample =
    "Players (Students) [accurately, 8 of 10 within 15 minutes] [solve matching problems] "
    "[fraction equivalence] in a [stylized kitchen] environment.";

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path() / "pedforge-test-XXXXXX";
    std::string tmpl = base.string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace pedforge::test

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

// Pseudocode export format.
//
//   GAME: Players (Students) [..] [..] [..] in a [..] environment.
//   SETUP
//     LOAD CONTENT "fraction equivalence"
//   LOOP
//     WHILE round is active
//       AWAIT player action "solve matching problems"
//   WIN_CONDITION
//     ...
//   LOSE_OR_RETRY
//     ...
//
// Rules:
//   - top-level (unindented) lines are section headers; the five sections
//     GAME, SETUP, LOOP, WIN_CONDITION, LOSE_OR_RETRY each appear exactly
//     once and in that order;
//   - the GAME header carries the canonical game sentence after "GAME: ";
//   - body lines are nested with two spaces per level and may open at most
//     one level deeper than the line above;
//   - the first token of every line is an uppercase keyword;
//   - every slot text of the game sentence appears verbatim somewhere below
//     the GAME header.

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pedforge/cnl.hpp"

namespace pedforge::development {

inline constexpr std::array<std::string_view, 5> kPseudocodeSections = {
    "GAME", "SETUP", "LOOP", "WIN_CONDITION", "LOSE_OR_RETRY"};

struct FormatCheck {
  bool pass = true;
  std::vector<std::string> reasons;
};

FormatCheck validate_pseudocode(std::string_view content);

/// Additionally requires the GAME header to name exactly `source`.
FormatCheck validate_pseudocode(std::string_view content, const cnl::ControlledSentence& source);

/// Reference rendering of a game sentence in the export format.
std::string pseudocode_template(const cnl::ControlledSentence& game);

/// Descriptive paragraph with a worked play example.
std::string paragraph_template(const cnl::ControlledSentence& game);

inline constexpr std::string_view kPlayExampleMarker = "For example";

}  // namespace pedforge::development

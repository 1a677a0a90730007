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

#include "pedforge/pseudocode.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "pedforge/text.hpp"

namespace pedforge::development {

namespace {

bool is_keyword(std::string_view tok) {
  if (!tok.empty() && tok.back() == ':') tok.remove_suffix(1);
  if (tok.empty() || tok.front() < 'A' || tok.front() > 'Z') return false;
  return std::all_of(tok.begin(), tok.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string_view first_token(std::string_view line) {
  std::size_t end = 0;
  while (end < line.size() && !text::is_space(line[end])) ++end;
  return line.substr(0, end);
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto nl = content.find('\n', start);
    auto line = content.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                  : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

FormatCheck check(std::string_view content, const cnl::ControlledSentence* source) {
  FormatCheck out;
  auto fail = [&out](std::string reason) {
    out.pass = false;
    out.reasons.push_back(std::move(reason));
  };

  std::array<bool, kPseudocodeSections.size()> seen{};
  int last_section = -1;
  int prev_depth = 0;
  bool in_section = false;
  std::optional<std::string_view> game_header;
  std::string traced_body;  // everything except the GAME header line

  auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    auto lineno = "line " + std::to_string(i + 1) + ": ";
    if (text::trim(line).empty()) continue;

    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    if (indent < line.size() && line[indent] == '\t') {
      fail(lineno + "tab used for indentation");
      continue;
    }
    auto body = line.substr(indent);
    auto tok = first_token(body);

    if (indent == 0) {
      auto name = tok;
      if (!name.empty() && name.back() == ':') name.remove_suffix(1);
      auto it = std::find(kPseudocodeSections.begin(), kPseudocodeSections.end(), name);
      if (it == kPseudocodeSections.end()) {
        fail(lineno + "unknown section '" + std::string(name) + "'");
        continue;
      }
      int idx = static_cast<int>(it - kPseudocodeSections.begin());
      if (seen[idx]) {
        fail("duplicate section " + std::string(name));
      } else if (idx < last_section) {
        fail("section " + std::string(name) + " out of order");
      }
      seen[idx] = true;
      last_section = std::max(last_section, idx);
      in_section = true;
      prev_depth = 0;
      if (name == "GAME") {
        game_header = text::trim(body.substr(tok.size()));
      } else {
        traced_body += line;
        traced_body += '\n';
      }
      continue;
    }

    traced_body += line;
    traced_body += '\n';
    if (!in_section) {
      fail(lineno + "body line before the first section");
      continue;
    }
    if (indent % 2 != 0) {
      fail(lineno + "indentation is not a multiple of two spaces");
      continue;
    }
    int depth = static_cast<int>(indent / 2);
    if (depth > prev_depth + 1) {
      fail(lineno + "indentation jumps more than one level");
    }
    prev_depth = depth;
    if (!is_keyword(tok)) {
      fail(lineno + "keyword '" + std::string(tok) + "' is not uppercase");
    }
  }

  for (std::size_t s = 0; s < kPseudocodeSections.size(); ++s) {
    if (!seen[s]) fail("missing section " + std::string(kPseudocodeSections[s]));
  }

  // Traceability: every slot of the game sentence must surface in the body.
  std::optional<cnl::ControlledSentence> game;
  if (game_header) {
    auto parsed = cnl::try_parse_sentence(*game_header, cnl::Register::Game);
    if (auto* s = std::get_if<cnl::ControlledSentence>(&parsed)) game = *s;
  }
  if (seen[0] && !game) {
    fail("GAME header does not carry a controlled game sentence");
  }
  if (source && game && !(*game == *source)) {
    fail("GAME header does not match the source sentence");
  }
  const cnl::ControlledSentence* trace_against = source ? source : (game ? &*game : nullptr);
  if (trace_against) {
    for (auto k : cnl::kSlotKinds) {
      const auto& slot = trace_against->slot(k);
      if (traced_body.find(slot) == std::string::npos) {
        fail("slot text not traced: " + slot);
      }
    }
  }
  return out;
}

}  // namespace

FormatCheck validate_pseudocode(std::string_view content) { return check(content, nullptr); }

FormatCheck validate_pseudocode(std::string_view content, const cnl::ControlledSentence& source) {
  return check(content, &source);
}

std::string pseudocode_template(const cnl::ControlledSentence& game) {
  using cnl::SlotKind;
  const auto& adv = game.slot(SlotKind::Adverb);
  const auto& verb = game.slot(SlotKind::Verb);
  const auto& noun = game.slot(SlotKind::Noun);
  const auto& adj = game.slot(SlotKind::Adjective);
  std::ostringstream o;
  o << "GAME: " << cnl::render_canonical(game) << '\n'
    << "SETUP\n"
    << "  LOAD CONTENT \"" << noun << "\"\n"
    << "  BUILD WORLD \"" << adj << "\"\n"
    << "  SET SUCCESS_RULE \"" << adv << "\"\n"
    << "LOOP\n"
    << "  WHILE round is active\n"
    << "    PRESENT next challenge drawn from CONTENT\n"
    << "    AWAIT player action \"" << verb << "\"\n"
    << "    CHECK action against SUCCESS_RULE\n"
    << "    UPDATE score and feedback\n"
    << "WIN_CONDITION\n"
    << "  WHEN performance satisfies SUCCESS_RULE\n"
    << "    SHOW success summary\n"
    << "LOSE_OR_RETRY\n"
    << "  IF time runs out OR attempts are exhausted\n"
    << "    SHOW hints for the player action\n"
    << "    RETRY round with fresh challenges\n";
  return o.str();
}

std::string paragraph_template(const cnl::ControlledSentence& game) {
  using cnl::SlotKind;
  const auto& adv = game.slot(SlotKind::Adverb);
  const auto& verb = game.slot(SlotKind::Verb);
  const auto& noun = game.slot(SlotKind::Noun);
  const auto& adj = game.slot(SlotKind::Adjective);
  std::ostringstream o;
  o << "In this game, players " << verb << " while working with " << noun << " in a " << adj
    << " world. Each round is judged by the rule \"" << adv
    << "\", so the challenge tightens as players improve. " << kPlayExampleMarker
    << ", in one round a player is handed challenges built from " << noun
    << " and has to " << verb << "; meeting \"" << adv
    << "\" ends the round in success, while falling short replays it with hints.";
  return o.str();
}

}  // namespace pedforge::development

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

#include <doctest.h>

#include <random>

#include "pedforge/cnl.hpp"
#include "pedforge/error.hpp"
#include "support.hpp"

using namespace pedforge;
using namespace pedforge::cnl;

namespace {

const char* kRock =
    "Players (Students) [accurately] [classify] [rock samples] in a [realistic fieldwork] environment.";

ControlledSentence rock(Register r = Register::Teaching) {
  return ControlledSentence(r, {"accurately", "classify", "rock samples", "realistic fieldwork"});
}

}  // namespace

TEST_CASE("parse decomposes the canonical frame") {
  auto s = parse_sentence(kRock, Register::Teaching);
  CHECK(s.slot(SlotKind::Adverb) == "accurately");
  CHECK(s.slot(SlotKind::Verb) == "classify");
  CHECK(s.slot(SlotKind::Noun) == "rock samples");
  CHECK(s.slot(SlotKind::Adjective) == "realistic fieldwork");
  CHECK(s.reg() == Register::Teaching);
}

TEST_CASE("parse tolerates spacing noise and a missing period") {
  auto s = parse_sentence(
      "  Players   (Students) [ accurately ]  [classify]\t[rock samples] in  a [realistic fieldwork] environment",
      Register::Game);
  CHECK(s == rock(Register::Game));
  CHECK(parse_sentence("Players (Students) [a] [b] [c] in a [d] environment .", Register::Game)
            .slot(SlotKind::Adjective) == "d");
}

TEST_CASE("slot contents are opaque to the frame words") {
  auto s = parse_sentence(
      "Players (Students) [in a] [Players (Students)] [environment.] in a [in a . environment] environment.",
      Register::Game);
  CHECK(s.slot(SlotKind::Adverb) == "in a");
  CHECK(s.slot(SlotKind::Verb) == "Players (Students)");
  CHECK(s.slot(SlotKind::Noun) == "environment.");
  CHECK(s.slot(SlotKind::Adjective) == "in a . environment");
}

TEST_CASE("render emits the exact canonical text") {
  CHECK(render_canonical(rock()) == kRock);
  CHECK(render_sentence(rock(), RenderMode::Canonical) == kRock);
  CHECK(render_sentence(rock(), RenderMode::Display) ==
        "Players (Students) accurately classify rock samples in a realistic fieldwork environment.");
}

TEST_CASE("display ranges are ordered, disjoint and cover each slot text") {
  auto s = ControlledSentence(Register::Game, {"8 of 10, fast", "sort", "cards", "neon lab"});
  auto d = render_display(s);
  REQUIRE(d.ranges.size() == 4);
  std::size_t end = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& r = d.ranges[i];
    CHECK(r.kind == kSlotKinds[i]);
    CHECK(r.offset >= end);
    CHECK(d.text.substr(r.offset, r.length) == s.slot(r.kind));
    end = r.offset + r.length;
  }
  CHECK(d.text.find('[') == std::string::npos);
}

TEST_CASE("slot colors are fixed") {
  CHECK(slot_color(SlotKind::Adverb) == "red");
  CHECK(slot_color(SlotKind::Verb) == "yellow");
  CHECK(slot_color(SlotKind::Noun) == "green");
  CHECK(slot_color(SlotKind::Adjective) == "blue");
}

TEST_CASE("invalid slot text cannot be constructed") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code_of([] { ControlledSentence(Register::Game, {"a", "b", " ", "d"}); }) ==
        ErrorCode::InvalidSlotText);
  CHECK(code_of([] { ControlledSentence(Register::Game, {"a", "b[", "c", "d"}); }) ==
        ErrorCode::InvalidSlotText);
  CHECK(code_of([] { ControlledSentence(Register::Game, {"a", "b", "c", "d\ne"}); }) ==
        ErrorCode::InvalidSlotText);
  CHECK(code_of([] { rock().with_slot(SlotKind::Noun, "x]y"); }) == ErrorCode::InvalidSlotText);
  CHECK(ControlledSentence(Register::Game, {" a ", "b", "c", "d"}).slot(SlotKind::Adverb) == "a");
}

TEST_CASE("diff reports exactly the changed kinds") {
  auto a = rock();
  CHECK(diff_sentences(a, a).empty());
  auto b = a.with_slot(SlotKind::Verb, "sort");
  auto d = diff_sentences(a, b);
  CHECK(d.changed_kinds() == std::vector<SlotKind>{SlotKind::Verb});
  CHECK(std::get<Changed>(d.at(SlotKind::Verb)) == Changed{"classify", "sort"});
  auto back = diff_sentences(b, a);
  CHECK(std::get<Changed>(back.at(SlotKind::Verb)) == Changed{"sort", "classify"});
  CHECK(diff_sentences(a, a.with_slot(SlotKind::Noun, "Rock samples")).changed(SlotKind::Noun));
  CHECK_THROWS_AS(diff_sentences(rock(Register::Teaching), rock(Register::Game)), Error);
}

TEST_CASE("json form round-trips") {
  auto s = rock(Register::Game);
  auto j = to_json(s);
  CHECK(j["register"] == "game");
  CHECK(j["noun"] == "rock samples");
  CHECK(sentence_from_json(j) == s);
}

TEST_CASE("parse_sentence throws a structured error") {
  try {
    parse_sentence("Players (Students) [classify] [rock samples] in a [realistic] environment.",
                   Register::Teaching);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.detail()["kind"] == "MissingSlot");
    CHECK(e.detail()["slot"] == "adverb");
  }
}

TEST_CASE("malformed surfaces yield their specific error") {
  for (const auto& c : test::rejection_cases()) {
    CAPTURE(c.surface);
    auto r = try_parse_sentence(c.surface, Register::Teaching);
    REQUIRE(std::holds_alternative<ParseError>(r));
    const auto& e = std::get<ParseError>(r);
    CHECK(e.kind == c.kind);
    CHECK(e.slot == c.slot);
  }
}

TEST_CASE("random valid sentences survive render and parse") {
  std::mt19937 rng(20261018);
  for (int i = 0; i < 2000; ++i) {
    auto [s, expected] = test::random_sentence(rng);
    CAPTURE(expected);
    CHECK(render_canonical(s) == expected);
    auto r = try_parse_sentence(expected, s.reg());
    REQUIRE(std::holds_alternative<ControlledSentence>(r));
    CHECK(std::get<ControlledSentence>(r) == s);
  }
}

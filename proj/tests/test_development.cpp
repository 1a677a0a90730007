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

#include "pedforge/development.hpp"
#include "support.hpp"

using namespace pedforge;
using namespace pedforge::development;
using cnl::SlotKind;

namespace {

cnl::ControlledSentence game() {
  return cnl::ControlledSentence(cnl::Register::Game, {"clear 8 of 10 orders before closing",
                                                       "slice pies into equal parts",
                                                       "fraction pie orders", "sunny cartoon bakery"});
}

const std::string kHeader = "GAME: " + cnl::render_canonical(game()) + "\n";

// Minimal valid document, written by hand.
std::string minimal() {
  return kHeader +
         "SETUP\n"
         "  LOAD \"fraction pie orders\" INTO deck\n"
         "  WORLD \"sunny cartoon bakery\"\n"
         "LOOP\n"
         "  DO \"slice pies into equal parts\"\n"
         "    SCORE it\n"
         "WIN_CONDITION\n"
         "  WHEN \"clear 8 of 10 orders before closing\"\n"
         "LOSE_OR_RETRY\n"
         "  RETRY\n";
}

bool has_reason(const FormatCheck& c, const std::string& fragment) {
  for (const auto& r : c.reasons) {
    if (r.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("hand-written pseudocode passes the format check") {
  auto c = validate_pseudocode(minimal(), game());
  CHECK(c.pass);
  CHECK(c.reasons.empty());
  CHECK(validate_pseudocode(pseudocode_template(game()), game()).pass);
}

TEST_CASE("format check names each violation") {
  auto replace = [](std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  auto doc = minimal();
  CHECK(has_reason(validate_pseudocode(replace(doc, "LOSE_OR_RETRY\n  RETRY\n", "")),
                   "missing section LOSE_OR_RETRY"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "LOOP\n", "SETUP\n")), "duplicate section SETUP"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "WIN_CONDITION\n", "BONUS\n")), "unknown section 'BONUS'"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "  RETRY", "  retry")), "is not uppercase"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "    SCORE", "      SCORE")),
                   "indentation jumps more than one level"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "    SCORE", "   SCORE")),
                   "not a multiple of two spaces"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "  RETRY", "\tRETRY")), "tab used for indentation"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "WORLD \"sunny cartoon bakery\"", "WORLD x")),
                   "slot text not traced: sunny cartoon bakery"));
  CHECK(has_reason(validate_pseudocode(replace(doc, "[", "")), "GAME header does not carry"));

  auto other = game().with_slot(SlotKind::Noun, "pizza orders");
  CHECK(has_reason(validate_pseudocode(doc, other), "does not match the source sentence"));

  auto swapped = replace(replace(doc, "WIN_CONDITION\n  WHEN \"clear 8 of 10 orders before closing\"\n", ""),
                         "LOSE_OR_RETRY\n  RETRY\n",
                         "LOSE_OR_RETRY\n  RETRY\nWIN_CONDITION\n  WHEN \"clear 8 of 10 orders before closing\"\n");
  CHECK(has_reason(validate_pseudocode(swapped), "out of order"));
}

TEST_CASE("levels and artifact json") {
  CHECK(to_string(ExpansionLevel::Paragraph) == "paragraph");
  CHECK(level_from_string("pseudocode") == ExpansionLevel::Pseudocode);
  CHECK_FALSE(level_from_string("chapter"));
  ExpansionArtifact a{"a2", ExpansionLevel::Paragraph, "text", std::string("a1"), std::nullopt, "c1", 2, 1, true};
  auto j = to_json(a);
  CHECK(j["derived_from"].is_null());
  auto b = artifact_from_json(j);
  CHECK(b.id == "a2");
  CHECK(b.parent == std::optional<std::string>("a1"));
  CHECK(b.outdated);
  CHECK(b.source_revision == 2);
}

TEST_CASE("zoom climbs sentence, paragraph, pseudocode and stops") {
  llm::Gateway gw(llm::mock_provider(7));
  ExpansionArtifact s{"a1", ExpansionLevel::Sentence, cnl::render_canonical(game()), std::nullopt,
                      std::nullopt, "c2", 3, 1, false};
  auto p = zoom_in(s, game(), gw);
  CHECK(p.level == ExpansionLevel::Paragraph);
  CHECK(p.parent == std::optional<std::string>("a1"));
  CHECK(p.source_candidate == "c2");
  CHECK(p.source_revision == 3);
  CHECK(p.content.find(kPlayExampleMarker) != std::string::npos);

  p.id = "a2";
  auto code = zoom_in(p, game(), gw);
  CHECK(code.level == ExpansionLevel::Pseudocode);
  CHECK(code.parent == std::optional<std::string>("a2"));
  CHECK(code.content.back() == '\n');
  CHECK(validate_pseudocode(code.content, game()).pass);

  code.id = "a3";
  try {
    zoom_in(code, game(), gw);
    FAIL("expected MaxDepth");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaxDepth);
    CHECK(e.detail()["artifact"] == "a3");
  }
}

TEST_CASE("refinement applies the instruction to the current sentence") {
  llm::Gateway gw(llm::mock_provider(7));
  auto doc = test::complete_document();
  auto ped = cnl::parse_sentence(test::kComposedExample, cnl::Register::Teaching);
  translation::TranslationCandidate accepted{"c1", 1, game(), {}, 1, translation::Origin::UserAuthored, 0};
  std::vector<std::string> turns = {"make it harder"};
  auto current = game();
  RefinementContext ctx{doc, ped, accepted, current, turns};

  auto r = refine_sentence(ctx, "change the adjective to cozy bakery", gw);
  CHECK(cnl::diff_sentences(current, r).changed_kinds() == std::vector<SlotKind>{SlotKind::Adjective});
  CHECK(r.slot(SlotKind::Adjective) == "cozy bakery");

  auto v = refine_sentence(ctx, "vary the verb", gw);
  CHECK(cnl::diff_sentences(current, v).changed_kinds() == std::vector<SlotKind>{SlotKind::Verb});

  CHECK(refine_sentence(ctx, "hmm, not sure", gw) == current);
  CHECK(test::error_code([&] { refine_sentence(ctx, "   ", gw); }) == ErrorCode::Validation);

  llm::Gateway quick(llm::mock_provider(7), {2, std::chrono::milliseconds(5000)});
  CHECK(test::error_code([&] { refine_sentence(ctx, "set the noun to pie [slices]", quick); }) ==
        ErrorCode::ProviderFailure);
}

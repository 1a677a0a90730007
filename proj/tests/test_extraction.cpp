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

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "pedforge/extraction.hpp"
#include "support.hpp"

using namespace pedforge;
using namespace pedforge::extraction;
using F = RequirementField;

namespace {

bool has_reason(const Specificity& s, const std::string& r) {
  return std::find(s.reasons.begin(), s.reasons.end(), r) != s.reasons.end();
}

llm::Gateway mock_gateway(std::uint64_t seed = 7) { return llm::Gateway(llm::mock_provider(seed)); }

}  // namespace

TEST_CASE("shipped catalog file matches the compiled-in defaults") {
  std::ifstream in(std::string(PEDFORGE_SOURCE_DIR) + "/data/elicitation.txt");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == default_catalog_text());
  auto c = Catalog::load(std::string(PEDFORGE_SOURCE_DIR) + "/data/elicitation.txt");
  CHECK(c.questions == Catalog::defaults().questions);
  CHECK(c.non_observable_verbs.size() == 6);
  CHECK(c.time_units.size() == 8);
}

TEST_CASE("catalog parse rejects broken files") {
  CHECK(test::error_code([] { Catalog::parse("[question concept_scope]\nWhat?\n"); }) ==
        ErrorCode::Validation);
  CHECK(test::error_code([] { Catalog::parse("stray line\n"); }) == ErrorCode::Validation);
  CHECK(test::error_code([] { Catalog::parse("[bogus]\n"); }) == ErrorCode::Validation);
}

TEST_CASE("specificity rules per field") {
  CHECK(specificity_check(F::ConceptScope, "").reasons == std::vector<std::string>{"empty"});
  CHECK(has_reason(specificity_check(F::ConceptScope, "fractions"), "fewer than 3 words"));
  CHECK(specificity_check(F::ConceptScope, "fraction equivalence for fourth graders").pass);
  CHECK(has_reason(specificity_check(F::Materials, "a [worksheet] here"),
                   "brackets are reserved for sentence slots"));

  CHECK(has_reason(specificity_check(F::ObservableAction, "understand fractions"), "non-observable verb"));
  CHECK(has_reason(specificity_check(F::ObservableAction, "to be aware of hazards"), "non-observable verb"));
  CHECK(has_reason(specificity_check(F::ObservableAction, "Knows the rules"), "non-observable verb"));
  CHECK(specificity_check(F::ObservableAction, "solve matching problems").pass);
  CHECK(specificity_check(F::ObservableAction, "learner-led sorting of cards").pass);

  CHECK(specificity_check(F::PerformanceTarget,
                          "accurately solve 8 of 10 matching problems within 15 minutes")
            .pass);
  auto vague = specificity_check(F::PerformanceTarget, "do well quickly");
  CHECK(has_reason(vague, "no number"));
  CHECK(has_reason(vague, "no time unit (minutes, hours, sessions or weeks)"));
  CHECK(has_reason(specificity_check(F::PerformanceTarget, "score 80% within 0 minutes"),
                   "time window must be positive"));
  CHECK(has_reason(specificity_check(F::PerformanceTarget, "score 80% within minutes 3"),
                   "time window needs a number before the time unit"));

  CHECK(specificity_check(F::Context, "environment: kitchen; realism: Stylized; tone: playful").pass);
  CHECK(specificity_check(F::Context, "setting = harbor\nrealism level = stylised\ntone = calm").pass);
  auto ctx = specificity_check(F::Context, "realism: photoreal");
  CHECK(has_reason(ctx, "missing environment type"));
  CHECK(has_reason(ctx, "realism level must be Abstract, Stylized or Realistic"));
  CHECK(has_reason(ctx, "missing tone"));
}

TEST_CASE("performance target structure") {
  auto v = parse_performance_target("accurately solve 8 of 10 matching problems within 15 minutes");
  REQUIRE(v);
  REQUIRE(v->quantity);
  CHECK(v->quantity->surface == "8 of 10");
  CHECK(v->quantity->unit == "count");
  CHECK(v->time_window.surface == "15 minutes");
  CHECK(v->quality_adverb == std::optional<std::string>("accurately"));

  auto pct = parse_performance_target("reach 80% in 2 sessions, only weekly");
  REQUIRE(pct);
  CHECK(pct->quantity->unit == "percentage");
  CHECK(pct->time_window.value == 2);
  CHECK_FALSE(pct->quality_adverb);

  auto c = parse_context("environment: kitchen; realism: stylised; tone: playful");
  REQUIRE(c);
  CHECK(c->realism_level == Realism::Stylized);
  CHECK(format_context(*c) == "environment: kitchen; realism: Stylized; tone: playful");
}

TEST_CASE("questions come in order and a failing answer repeats its question") {
  RequirementDocument doc;
  auto field_of = [](const NextQuestion& q) { return std::get<Question>(q).field; };
  CHECK(field_of(next_question(doc)) == F::ConceptScope);
  doc = ingest_answer(doc, F::ConceptScope, "fractions");
  CHECK(field_of(next_question(doc)) == F::ConceptScope);
  CHECK(doc.entry(F::ConceptScope)->raw == "fractions");
  CHECK_FALSE(doc.passed(F::ConceptScope));

  for (const auto& a : test::passing_answers()) {
    CHECK(field_of(next_question(doc)) == a.field);
    doc = ingest_answer(doc, a.field, a.text);
  }
  CHECK(std::holds_alternative<Complete>(next_question(doc)));
  CHECK(doc.complete());

  RequirementDocument partial;
  for (const auto& a : test::passing_answers()) {
    if (a.field == F::Context) break;
    partial = ingest_answer(partial, a.field, a.text);
  }
  auto q = std::get<Question>(next_question(partial));
  CHECK(q.field == F::Context);
  CHECK(q.subprompts.size() == 3);
}

TEST_CASE("answering one field never touches another") {
  auto answers = test::passing_answers();
  const std::vector<std::string> failing = {"x", "fractions", "know it", "fast", "tone: dry"};
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    RequirementDocument doc;
    for (int step = 0; step < 12; ++step) {
      auto i = pick(rng);
      auto text = coin(rng) ? answers[i].text : failing[i];
      auto next = ingest_answer(doc, kFields[i], text);
      for (auto f : kFields) {
        if (f == kFields[i]) continue;
        CHECK(next.entry(f) == doc.entry(f));
      }
      CHECK(next.entry(kFields[i])->raw == text);
      doc = next;
    }
  }
}

TEST_CASE("document json round-trips") {
  auto doc = ingest_answer(test::complete_document(), F::Materials, "bits");
  CHECK(document_from_json(to_json(doc)) == doc);
  CHECK(to_json(doc)["complete"] == false);
  CHECK(to_json(RequirementDocument{})["context"]["status"] == "unanswered");
}

TEST_CASE("draft and composition follow the answers") {
  auto doc = test::complete_document();
  CHECK(cnl::render_canonical(draft_pedagogy_sentence(doc)) == test::kComposedExample);
  auto gw = mock_gateway();
  auto s = compose_pedagogy_sentence(doc, gw);
  CHECK(cnl::render_canonical(s) == test::kComposedExample);
  CHECK(s.reg() == cnl::Register::Teaching);
}

TEST_CASE("composition refuses an incomplete document") {
  auto doc = ingest_answer(test::complete_document(), F::PerformanceTarget, "soon");
  try {
    draft_pedagogy_sentence(doc);
    FAIL("expected IncompleteDocument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteDocument);
    CHECK(e.detail()["pending"] == nlohmann::json::array({"performance_target"}));
  }
  auto gw = mock_gateway();
  CHECK(test::error_code([&] { compose_pedagogy_sentence(RequirementDocument{}, gw); }) ==
        ErrorCode::IncompleteDocument);
}

TEST_CASE("random complete documents always compose a teaching sentence") {
  const std::vector<std::string> concepts = {"photosynthesis in leafy plants", "plate tectonics, grade 7",
                                             "ratios: unit rates and scaling", "cell division for biology 101"};
  const std::vector<std::string> actions = {"sort organisms by energy source", "to label plate boundaries",
                                            "compute unit rates", "sequence mitosis stages"};
  const std::vector<std::string> targets = {"correctly 9 of 10 within 20 minutes",
                                            "reach 85% accuracy in 2 sessions",
                                            "finish 4 challenges within 1 hour", "score 7 within 3 weeks"};
  const std::vector<std::string> contexts = {"environment: rainforest; realism: Realistic; tone: calm",
                                             "setting=volcano island\nrealism=abstract\ntone=urgent",
                                             "environment type: bakery; realism: stylised; tone: warm"};
  std::mt19937 rng(4242);
  auto any = [&rng](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  for (int i = 0; i < 100; ++i) {
    RequirementDocument doc;
    doc = ingest_answer(doc, F::ConceptScope, any(concepts));
    doc = ingest_answer(doc, F::Materials, "a deck of printed cards");
    doc = ingest_answer(doc, F::ObservableAction, any(actions));
    doc = ingest_answer(doc, F::PerformanceTarget, any(targets));
    doc = ingest_answer(doc, F::Context, any(contexts));
    REQUIRE(doc.complete());
    auto gw = mock_gateway(static_cast<std::uint64_t>(i));
    auto s = compose_pedagogy_sentence(doc, gw);
    auto text = cnl::render_canonical(s);
    auto again = cnl::try_parse_sentence(text, cnl::Register::Teaching);
    REQUIRE(std::holds_alternative<cnl::ControlledSentence>(again));
    CHECK(std::get<cnl::ControlledSentence>(again) == s);
  }
}

TEST_CASE("mock options are deterministic and distinct") {
  auto gw = mock_gateway(7);
  auto a = propose_options(F::ConceptScope, RequirementDocument{}, gw);
  auto b = propose_options(F::ConceptScope, RequirementDocument{}, gw);
  CHECK(a.options == b.options);
  CHECK(a.options == std::vector<std::string>{"circuit design for an introductory unit",
                                               "circuit design within a single lesson",
                                               "common misconceptions about circuit design"});
  auto doc = test::complete_document();
  for (auto f : kFields) {
    auto o = propose_options(f, doc, gw);
    CHECK(o.options.size() >= 2);
    CHECK(o.options.size() <= 5);
    CHECK(std::set<std::string>(o.options.begin(), o.options.end()).size() == o.options.size());
    CHECK(to_json(o)["field"] == std::string(to_string(f)));
  }
  auto obs = propose_options(F::ObservableAction, doc, gw);
  CHECK(obs.options[0] == "identify examples of fraction equivalence");
}

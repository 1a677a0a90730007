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
#include <httplib.h>

#include <thread>

#include "pedforge/api.hpp"
#include "pedforge/pseudocode.hpp"
#include "pedforge/workbench.hpp"
#include "support.hpp"

using namespace pedforge;
using nlohmann::json;

namespace {

struct Reply {
  int status = 0;
  json body;
  std::string text;
};

class Fixture {
 public:
  explicit Fixture(std::vector<llm::ScriptStep> script = {})
      : store_(dir_.path()),
        wb_(store_, llm::Gateway(llm::mock_provider(7, std::move(script)))),
        server_(wb_) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 200 && !client_->Get("/health"); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  ~Fixture() {
    server_.stop();
    thread_.join();
  }

  Reply get(const std::string& path) { return wrap(client_->Get(path)); }
  Reply post(const std::string& path, const json& body = json::object()) {
    return wrap(client_->Post(path, body.dump(), "application/json"));
  }
  Reply post_raw(const std::string& path, const std::string& body) {
    return wrap(client_->Post(path, body, "application/json"));
  }
  Reply patch(const std::string& path, const json& body) {
    return wrap(client_->Patch(path, body.dump(), "application/json"));
  }

  store::ProjectStore& store() { return store_; }

 private:
  static Reply wrap(const httplib::Result& r) {
    REQUIRE(r);
    Reply out{r->status, json::parse(r->body, nullptr, false), r->body};
    return out;
  }

  test::TempDir dir_;
  store::ProjectStore store_;
  service::Workbench wb_;
  api::ApiServer server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

std::string answer_all(Fixture& f) {
  auto created = f.post("/projects");
  REQUIRE(created.status == 201);
  std::string base = "/projects/" + created.body["id"].get<std::string>();
  for (const auto& a : test::passing_answers()) {
    auto r = f.post(base + "/answers", {{"field", extraction::to_string(a.field)}, {"text", a.text}});
    REQUIRE(r.status == 200);
    CHECK(r.body["specificity"]["pass"] == true);
  }
  return base;
}

void check_error(const Reply& r, int status, const std::string& code) {
  CHECK(r.status == status);
  CHECK(r.body["code"] == code);
  CHECK(r.body["message"].is_string());
}

}  // namespace

TEST_CASE("service endpoints") {
  Fixture f;
  auto h = f.get("/health");
  CHECK(h.status == 200);
  CHECK(h.body["format"] == "pedforge/1");
  auto t = f.get("/mapping-table");
  CHECK(t.body["rows"].size() == 4);
  check_error(f.get("/nope"), 404, "NOT_FOUND");
  check_error(f.get("/projects/0123456789ab"), 404, "NOT_FOUND");
}

TEST_CASE("a full session over http") {
  Fixture f;
  auto created = f.post("/projects");
  std::string base = "/projects/" + created.body["id"].get<std::string>();
  CHECK(created.body["phase"] == "extraction");

  auto q = f.get(base + "/question");
  CHECK(q.body["field"] == "concept_scope");
  CHECK(q.body["number"] == 1);
  auto opts = f.get(base + "/options/concept_scope");
  CHECK(opts.status == 200);
  CHECK(opts.body["options"].size() == 3);

  auto weak = f.post(base + "/answers", {{"field", "concept_scope"}, {"text", "fractions"}});
  CHECK(weak.body["specificity"]["pass"] == false);
  CHECK(weak.body["question"]["field"] == "concept_scope");
  for (const auto& a : test::passing_answers()) {
    if (a.field == extraction::RequirementField::Context) {
      auto r = f.post(base + "/answers",
                      {{"field", "context"}, {"environment", "kitchen"}, {"realism", "Stylized"}, {"tone", "playful"}});
      CHECK(r.body["specificity"]["pass"] == true);
      CHECK(r.body["question"]["complete"] == true);
    } else {
      f.post(base + "/answers", {{"field", extraction::to_string(a.field)}, {"text", a.text}});
    }
  }

  auto ped = f.post(base + "/pedagogy-sentence");
  REQUIRE(ped.status == 200);
  CHECK(ped.body["canonical"] == test::kComposedExample);
  CHECK(ped.body["display"]["ranges"].size() == 4);

  auto cands = f.post(base + "/candidates", {{"n", 3}});
  REQUIRE(cands.status == 201);
  REQUIRE(cands.body["candidates"].size() == 3);
  for (const auto& c : cands.body["candidates"]) CHECK(c["fully_aligned"] == true);
  CHECK(cands.body["candidates"][2]["id"] == "c3");

  auto regen = f.post(base + "/candidates/c2/slots/noun/regenerate");
  CHECK(regen.status == 200);
  CHECK(regen.body["revision"] == 2);

  auto accepted = f.post(base + "/candidates/c1/accept");
  REQUIRE(accepted.status == 200);
  CHECK(accepted.body["already_accepted"] == false);
  auto again = f.post(base + "/candidates/c1/accept");
  CHECK(again.body["already_accepted"] == true);
  auto sentence_id = accepted.body["artifact"]["id"].get<std::string>();

  auto refined = f.post(base + "/refine", {{"instruction", "change the adjective to cozy bakery"}});
  REQUIRE(refined.status == 200);
  CHECK(refined.body["changed"] == json::array({"adjective"}));
  CHECK(refined.body["outdated"] == json::array({sentence_id}));
  check_error(f.post(base + "/artifacts/" + sentence_id + "/zoom"), 409, "OUTDATED_ARTIFACT");

  auto aid = refined.body["artifact"]["id"].get<std::string>();
  auto para = f.post(base + "/artifacts/" + aid + "/zoom");
  REQUIRE(para.status == 201);
  CHECK(para.body["level"] == "paragraph");
  auto code = f.post(base + "/artifacts/" + para.body["id"].get<std::string>() + "/zoom");
  REQUIRE(code.status == 201);
  CHECK(code.body["format_check"]["pass"] == true);
  auto code_id = code.body["id"].get<std::string>();
  check_error(f.post(base + "/artifacts/" + code_id + "/zoom"), 409, "MAX_DEPTH");

  auto exported = f.get(base + "/artifacts/" + code_id + "/export");
  CHECK(exported.status == 200);
  CHECK(development::validate_pseudocode(exported.text).pass);

  auto tr = f.get(base + "/trace/artifact:" + code_id);
  CHECK(tr.body["answer_events"] == 5);
  CHECK(tr.body["chain"].back()["action"] == "AnswerIngested");

  auto ev = f.get(base + "/events?since=10");
  CHECK(ev.body["events"][0]["sequence"] == 11);
  CHECK(ev.body["last_sequence"] == f.get(base).body["last_sequence"]);
  check_error(f.get(base + "/events?since=x"), 400, "VALIDATION");

  CHECK(f.post(base + "/phase", {{"target", "development"}}).body["phase"] == "development");
  auto view = f.get(base);
  CHECK(view.body["gates"]["development"].is_null());
  CHECK(view.body["current_sentence"] == aid);
}

TEST_CASE("alignment gate and error bodies") {
  Fixture f;
  auto base = answer_all(f);
  check_error(f.post(base + "/candidates"), 409, "GATE_NOT_SATISFIED");
  check_error(f.post(base + "/refine", {{"instruction", "x"}}), 409, "NO_ACCEPTED_CANDIDATE");
  f.post(base + "/pedagogy-sentence");
  f.post(base + "/candidates", {{"n", 2}});
  check_error(f.post(base + "/candidates", {{"n", 9}}), 400, "VALIDATION");
  check_error(f.post(base + "/candidates", {{"n", "two"}}), 400, "VALIDATION");
  check_error(f.post_raw(base + "/refine", "{not json"), 400, "VALIDATION");
  check_error(f.post(base + "/answers", {{"field", "mood"}, {"text", "x"}}), 400, "VALIDATION");
  check_error(f.post(base + "/candidates/c7/accept"), 404, "NOT_FOUND");
  check_error(f.patch(base + "/candidates/c1/slots/verb", {{"text", "a [b]"}}), 400, "INVALID_SLOT_TEXT");

  auto accepted = f.post(base + "/candidates/c1/accept");
  REQUIRE(accepted.status == 200);
  auto edit = f.patch(base + "/pedagogy-sentence/slots/verb", {{"text", "match equivalent fractions"}});
  CHECK(edit.status == 200);
  CHECK(edit.body["acceptance_cleared"] == true);
  CHECK(edit.body["pedagogy"]["version"] == 2);

  auto refused = f.post(base + "/candidates/c2/accept");
  check_error(refused, 409, "NOT_ALIGNED");
  CHECK(refused.body["detail"]["stale"] == json::array({"verb"}));
  CHECK(refused.body["detail"]["missing"].empty());

  auto log = f.get(base + "/events");
  auto actions = json::array();
  for (const auto& e : log.body["events"]) actions.push_back(e["action"]);
  CHECK(std::find(actions.begin(), actions.end(), "AcceptanceCleared") != actions.end());

  auto authored = f.post(base + "/candidates",
                         {{"sentence", "Players (Students) [beat 8 of 10 orders in 15 minutes] [match slices] "
                                       "[fraction pies] in a [cartoon kitchen] environment."},
                          {"rationales", {{"adverb", "a"}, {"verb", "b"}}}});
  CHECK(authored.status == 201);
  CHECK(authored.body["fully_aligned"] == false);
  check_error(f.post(base + "/candidates", {{"sentence", "Players [x]"}}), 400, "PARSE_ERROR");
}

TEST_CASE("provider failures surface as errors and leave the log alone") {
  using S = llm::ScriptStep;
  Fixture f({S::Bad, S::Bad, S::Bad, S::Bad});
  auto base = answer_all(f);
  auto before = f.get(base + "/events").body["last_sequence"];
  auto r = f.post(base + "/pedagogy-sentence");
  check_error(r, 502, "PROVIDER_FAILURE");
  CHECK(r.body["detail"]["attempts"] == 4);
  CHECK(f.get(base + "/events").body["last_sequence"] == before);
  CHECK(f.post(base + "/pedagogy-sentence").status == 200);
}

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

#include <mutex>
#include <thread>

#include "pedforge/gateway.hpp"
#include "support.hpp"

using namespace pedforge;
using namespace pedforge::llm;
using namespace std::chrono_literals;

namespace {

const char* kGood =
    "Players (Students) [accurately] [classify] [rock samples] in a [realistic fieldwork] environment.";

// Replays fixed replies and records every prompt it sees.
class Scripted final : public Provider {
 public:
  explicit Scripted(std::vector<std::string> replies, std::chrono::milliseconds delay = 0ms)
      : replies_(std::move(replies)), delay_(delay) {}
  std::string name() const override { return "scripted"; }
  std::string complete(const std::string& prompt) override {
    std::this_thread::sleep_for(delay_);
    std::lock_guard lock(mu_);
    prompts.push_back(prompt);
    auto i = std::min(prompts.size() - 1, replies_.size() - 1);
    if (replies_[i] == "THROW") throw std::runtime_error("boom");
    return replies_[i];
  }
  std::vector<std::string> prompts;

 private:
  std::vector<std::string> replies_;
  std::chrono::milliseconds delay_;
  std::mutex mu_;
};

PromptSpec sentence_spec() {
  PromptSpec s;
  s.phase = Phase::Translation;
  s.objective = "Write a sentence.";
  s.context_blocks = {{"Pedagogy sentence", kGood}, {"Notes", "line one\nline two"}};
  s.output_contract = OutputContract::sentence(cnl::Register::Game);
  return s;
}

}  // namespace

TEST_CASE("prompt layout parses back to its parts") {
  auto spec = sentence_spec();
  auto text = build_prompt(spec);
  CHECK(text.rfind("PHASE: translation\nOBJECTIVE:\nWrite a sentence.\nCONTEXT [Pedagogy sentence]:\n", 0) == 0);
  auto p = parse_prompt(text);
  CHECK(p.phase == "translation");
  CHECK(p.objective == spec.objective);
  CHECK(p.context_blocks == spec.context_blocks);
  CHECK(p.contract_token == "controlled-sentence:game");
  CHECK(p.correction.empty());
  auto corrected = parse_prompt(text + corrective_suffix("bad slot"));
  CHECK(corrected.context_blocks == spec.context_blocks);
  CHECK(corrected.correction.find("bad slot") != std::string::npos);
}

TEST_CASE("distinct specs give distinct prompts") {
  auto a = sentence_spec();
  auto b = a;
  b.context_blocks[1].text = "line one";
  auto c = a;
  c.output_contract = OutputContract::sentence(cnl::Register::Teaching);
  auto d = a;
  d.phase = Phase::Development;
  CHECK(build_prompt(a) != build_prompt(b));
  CHECK(build_prompt(a) != build_prompt(c));
  CHECK(build_prompt(a) != build_prompt(d));
}

TEST_CASE("invalid specs are refused") {
  auto s = sentence_spec();
  s.context_blocks.push_back({"Notes", "again"});
  CHECK(test::error_code([&] { build_prompt(s); }) == ErrorCode::Validation);
  s = sentence_spec();
  s.objective = "  ";
  CHECK(test::error_code([&] { build_prompt(s); }) == ErrorCode::Validation);
}

TEST_CASE("contract checks") {
  auto game = OutputContract::sentence(cnl::Register::Game);
  CHECK_FALSE(contract_violation(game, kGood));
  CHECK(contract_violation(game, "Players (Students) [] [] [] in a [] environment."));
  CHECK(contract_violation(OutputContract::free_text({"For example"}), "plain text"));
  CHECK_FALSE(contract_violation(OutputContract::free_text({"For example"}), "for example, this"));
  CHECK(contract_violation(OutputContract::option_list(), "- one\n- one\n"));
  CHECK_FALSE(contract_violation(OutputContract::option_list(), "- one\n- two\n"));

  auto s = cnl::parse_sentence(kGood, cnl::Register::Game);
  std::array<std::string, 4> why = {"a", "b", "c", "d"};
  auto reply = format_candidate_reply(s, why);
  CHECK_FALSE(contract_violation(OutputContract::candidate(), reply));
  auto parsed = std::get<CandidateReply>(parse_candidate_reply(reply));
  CHECK(parsed.sentence == s);
  CHECK(parsed.explanations == why);
  auto missing = reply.substr(0, reply.find("NOUN:"));
  CHECK(std::get<std::string>(parse_candidate_reply(missing)) == "missing NOUN rationale");
}

TEST_CASE("retries until a reply satisfies the contract") {
  auto p = std::make_shared<Scripted>(std::vector<std::string>{"nope", "[]", kGood});
  Gateway gw(p);
  auto r = gw.complete(sentence_spec());
  CHECK(r.attempts == 3);
  CHECK(r.validated);
  CHECK(r.raw_text == kGood);
  REQUIRE(p->prompts.size() == 3);
  CHECK(parse_prompt(p->prompts[0]).correction.empty());
  CHECK_FALSE(parse_prompt(p->prompts[1]).correction.empty());
}

TEST_CASE("an exhausted budget is a provider failure") {
  auto p = std::make_shared<Scripted>(std::vector<std::string>{"bad"});
  Gateway gw(p);
  try {
    gw.complete(sentence_spec());
    FAIL("expected ProviderFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProviderFailure);
    CHECK(e.detail()["attempts"] == 4);
    CHECK(e.detail()["last_violation"].get<std::string>().find("template") != std::string::npos);
  }
  CHECK(p->prompts.size() == 4);
}

TEST_CASE("throwing and slow attempts count as failures") {
  auto thrower = std::make_shared<Scripted>(std::vector<std::string>{"THROW", kGood});
  CHECK(Gateway(thrower).complete(sentence_spec()).attempts == 2);

  auto slow = std::make_shared<Scripted>(std::vector<std::string>{kGood}, 300ms);
  RetryPolicy tight{2, 20ms};
  try {
    Gateway(slow, tight).complete(sentence_spec());
    FAIL("expected ProviderFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProviderFailure);
    CHECK(e.detail()["last_violation"].get<std::string>().find("timed out") != std::string::npos);
  }
  // Let the abandoned workers drain before the provider goes out of scope here.
  std::this_thread::sleep_for(700ms);
}

TEST_CASE("mock provider is a pure function of seed and prompt") {
  auto prompt = build_prompt(sentence_spec());
  auto a = mock_provider(3);
  auto b = mock_provider(3);
  CHECK(a->complete(prompt) == b->complete(prompt));
  CHECK(a->name() == "mock:3");
  auto scripted = mock_provider(3, parse_script("bad, good"));
  auto r = Gateway(scripted).complete(sentence_spec());
  CHECK(r.attempts == 2);
  CHECK(parse_script("Bad,GOOD,,bad") ==
        std::vector<ScriptStep>{ScriptStep::Bad, ScriptStep::Good, ScriptStep::Bad});
  CHECK(test::error_code([] { parse_script("maybe"); }) == ErrorCode::Validation);
}

TEST_CASE("http provider speaks the chat-completion shape") {
  httplib::Server srv;
  std::string seen_auth;
  nlohmann::json seen_body;
  srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = nlohmann::json::parse(req.body);
    nlohmann::json reply = {
        {"choices", {{{"message", {{"role", "assistant"}, {"content", kGood}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  srv.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  auto origin = "http://127.0.0.1:" + std::to_string(port);
  HttpProviderConfig cfg{origin + "/v1/chat/completions", "m1", "k3y", 5000ms};
  auto r = Gateway(http_provider(cfg)).complete(sentence_spec());
  CHECK(r.raw_text == kGood);
  CHECK(r.provider_name == "http:m1");
  CHECK(seen_auth == "Bearer k3y");
  CHECK(seen_body["model"] == "m1");
  CHECK(seen_body["messages"][0]["role"] == "user");
  CHECK(seen_body["messages"][0]["content"] == build_prompt(sentence_spec()));

  HttpProviderConfig bad{origin + "/broken", "m1", "", 5000ms};
  CHECK(test::error_code([&] { Gateway(http_provider(bad), {2, 5000ms}).complete(sentence_spec()); }) ==
        ErrorCode::ProviderFailure);
  CHECK(test::error_code([] { http_provider({"not a url", "m", "", 1000ms}); }) == ErrorCode::Validation);

  srv.stop();
  t.join();
}

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

// Every model call goes through Gateway::complete. Replies are checked
// against the request's output contract and reissued with a corrective
// suffix until one passes or the retry budget runs out; callers only ever
// see validated text.

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pedforge/cnl.hpp"

namespace pedforge::llm {

enum class Phase { Extraction, Translation, Development };

std::string_view to_string(Phase p);

enum class ContractKind { FreeText, ControlledSentence, Candidate, Pseudocode, OptionList };

struct OutputContract {
  ContractKind kind = ContractKind::FreeText;
  cnl::Register reg = cnl::Register::Game;          // ControlledSentence only
  std::vector<std::string> required_phrases;        // FreeText only
  std::optional<cnl::ControlledSentence> source;    // Pseudocode only

  static OutputContract free_text(std::vector<std::string> required_phrases = {});
  static OutputContract sentence(cnl::Register reg);
  static OutputContract candidate();
  static OutputContract pseudocode(const cnl::ControlledSentence& source);
  static OutputContract option_list();

  /// Short token written into the prompt header, e.g. "controlled-sentence:game".
  std::string token() const;
};

struct ContextBlock {
  std::string label;
  std::string text;
  friend bool operator==(const ContextBlock&, const ContextBlock&) = default;
};

struct PromptSpec {
  Phase phase = Phase::Extraction;
  std::string objective;
  std::vector<ContextBlock> context_blocks;
  OutputContract output_contract;

  /// Throws Error(Validation) for an empty objective or duplicate labels.
  void validate() const;
};

/// Prompt layout (lines):
///
///   PHASE: <phase>
///   OBJECTIVE:
///   <objective>
///   CONTEXT [<label>]:
///   <text>
///   ...
///   OUTPUT CONTRACT [<token>]:
///   <contract statement>
///
/// Lines beginning with "PHASE:", "OBJECTIVE:", "CONTEXT [", "OUTPUT CONTRACT ["
/// or "CORRECTION:" are delimiters; block text must not contain them.
std::string build_prompt(const PromptSpec& spec);

/// Inverse of build_prompt (corrective suffix, if any, is reported
/// separately). Used by the mock provider and the injectivity tests.
struct ParsedPrompt {
  std::string phase;
  std::string objective;
  std::vector<ContextBlock> context_blocks;
  std::string contract_token;
  std::string contract_statement;
  std::string correction;

  const std::string* block(std::string_view label) const;
};
ParsedPrompt parse_prompt(std::string_view prompt);

/// nullopt when `reply` satisfies the contract, otherwise the violation.
std::optional<std::string> contract_violation(const OutputContract& contract,
                                              std::string_view reply);

std::string corrective_suffix(const std::string& violation);

// Candidate replies: a SENTENCE line followed by one rationale line per kind.
struct CandidateReply {
  cnl::ControlledSentence sentence;
  std::array<std::string, 4> explanations;
};
std::variant<CandidateReply, std::string> parse_candidate_reply(std::string_view reply);
std::string format_candidate_reply(const cnl::ControlledSentence& sentence,
                                   const std::array<std::string, 4>& explanations);

/// "- option" lines, trimmed, exact duplicates removed, order kept.
std::vector<std::string> parse_option_list(std::string_view reply);

struct RetryPolicy {
  int max_attempts = 4;  // one try plus three retries
  std::chrono::milliseconds per_attempt_timeout{60'000};
};

struct ProviderResult {
  std::string raw_text;
  int attempts = 0;
  bool validated = false;
  std::string provider_name;
};

/// Text-in, text-out completion. Implementations must be callable from
/// several threads at once.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const std::string& prompt) = 0;
};

class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Provider> provider, RetryPolicy policy = {});

  /// Throws Error(ProviderFailure) with {attempts, last_violation} after the
  /// budget is spent. A timed-out or throwing attempt counts as failed.
  ProviderResult complete(const PromptSpec& spec) const;
  ProviderResult complete(const PromptSpec& spec, const RetryPolicy& policy) const;

  const RetryPolicy& policy() const noexcept { return policy_; }
  std::string provider_name() const { return provider_->name(); }

 private:
  std::shared_ptr<Provider> provider_;
  RetryPolicy policy_;
};

// ---- providers -------------------------------------------------------------

enum class ScriptStep { Good, Bad };

/// Deterministic offline provider: every reply is a pure function of
/// (seed, prompt). An optional script forces leading replies to be good or
/// malformed; once the script is consumed every reply is good.
std::shared_ptr<Provider> mock_provider(std::uint64_t seed, std::vector<ScriptStep> script = {});

/// Parses "bad,bad,good" style scripts. Throws Error(Validation).
std::vector<ScriptStep> parse_script(std::string_view spec);

/// Chat-completion over HTTP(S). Wire shape:
///   POST <endpoint>  {"model": m, "messages": [{"role": "user", "content": prompt}]}
///   200 -> {"choices": [{"message": {"role": "assistant", "content": reply}}]}
struct HttpProviderConfig {
  std::string endpoint;  // e.g. https://host/v1/chat/completions
  std::string model;
  std::string api_key;   // sent as "Authorization: Bearer <key>" when nonempty
  std::chrono::milliseconds timeout{60'000};
};
std::shared_ptr<Provider> http_provider(HttpProviderConfig config);

/// Reads PEDFORGE_LLM_ENDPOINT, PEDFORGE_LLM_MODEL and PEDFORGE_LLM_API_KEY.
/// Throws Error(Validation) when the endpoint is unset.
HttpProviderConfig http_provider_config_from_env();

}  // namespace pedforge::llm

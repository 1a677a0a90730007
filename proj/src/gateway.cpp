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

#include "pedforge/gateway.hpp"

#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "pedforge/error.hpp"
#include "pedforge/pseudocode.hpp"
#include "pedforge/text.hpp"

namespace pedforge::llm {

namespace {

constexpr std::string_view kPhaseTag = "PHASE: ";
constexpr std::string_view kObjectiveTag = "OBJECTIVE:";
constexpr std::string_view kContextTag = "CONTEXT [";
constexpr std::string_view kContractTag = "OUTPUT CONTRACT [";
constexpr std::string_view kCorrectionTag = "CORRECTION:";

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::vector<std::string_view> lines_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

const std::array<std::string_view, 4> kRationalePrefixes = {"ADVERB:", "VERB:", "NOUN:",
                                                            "ADJECTIVE:"};

std::string contract_statement(const OutputContract& c) {
  std::ostringstream o;
  switch (c.kind) {
    case ContractKind::FreeText:
      o << "Reply with plain prose in a single paragraph.";
      for (const auto& p : c.required_phrases) {
        o << "\nThe reply must contain the phrase \"" << p << "\".";
      }
      break;
    case ContractKind::ControlledSentence:
      o << "Reply with exactly one line in the controlled template, written in "
        << cnl::to_string(c.reg) << " language, filling all four bracketed slots:\n"
        << "Players (Students) [<adverbs>] [<verbs>] [<nouns>] in a [<adjectives>] "
           "environment.\n"
        << "Slot text may not contain brackets or line breaks.";
      break;
    case ContractKind::Candidate:
      o << "Reply with exactly five lines:\n"
        << "SENTENCE: Players (Students) [<adverbs>] [<verbs>] [<nouns>] in a [<adjectives>] "
           "environment.\n"
        << "ADVERB: <how the rules and parameters realize the pedagogy adverbs>\n"
        << "VERB: <how the mechanic realizes the pedagogy verbs>\n"
        << "NOUN: <how the game content realizes the pedagogy nouns>\n"
        << "ADJECTIVE: <how the game world realizes the pedagogy adjectives>\n"
        << "The SENTENCE is written in game language; slot text may not contain brackets.";
      break;
    case ContractKind::Pseudocode:
      o << "Reply with pseudocode made of the sections GAME, SETUP, LOOP, WIN_CONDITION and "
           "LOSE_OR_RETRY, in that order.\n"
        << "The first line is \"GAME: \" followed by the game sentence exactly as given.\n"
        << "Nest lines with two spaces per level; start every line with an UPPERCASE "
           "keyword.\n"
        << "Quote every bracketed slot text of the game sentence verbatim at least once "
           "below the GAME line.";
      break;
    case ContractKind::OptionList:
      o << "Reply with 2 to 5 lines, each of the form \"- <option>\". Options must be "
           "distinct.";
      break;
  }
  return o.str();
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Extraction: return "extraction";
    case Phase::Translation: return "translation";
    case Phase::Development: return "development";
  }
  return "extraction";
}

OutputContract OutputContract::free_text(std::vector<std::string> required_phrases) {
  OutputContract c;
  c.kind = ContractKind::FreeText;
  c.required_phrases = std::move(required_phrases);
  return c;
}

OutputContract OutputContract::sentence(cnl::Register reg) {
  OutputContract c;
  c.kind = ContractKind::ControlledSentence;
  c.reg = reg;
  return c;
}

OutputContract OutputContract::candidate() {
  OutputContract c;
  c.kind = ContractKind::Candidate;
  return c;
}

OutputContract OutputContract::pseudocode(const cnl::ControlledSentence& source) {
  OutputContract c;
  c.kind = ContractKind::Pseudocode;
  c.source = source;
  return c;
}

OutputContract OutputContract::option_list() {
  OutputContract c;
  c.kind = ContractKind::OptionList;
  return c;
}

std::string OutputContract::token() const {
  switch (kind) {
    case ContractKind::FreeText: return "free-text";
    case ContractKind::ControlledSentence:
      return "controlled-sentence:" + std::string(cnl::to_string(reg));
    case ContractKind::Candidate: return "candidate";
    case ContractKind::Pseudocode: return "pseudocode";
    case ContractKind::OptionList: return "option-list";
  }
  return "free-text";
}

void PromptSpec::validate() const {
  if (text::trim(objective).empty()) {
    throw Error(ErrorCode::Validation, "prompt objective must be nonempty");
  }
  std::set<std::string> labels;
  for (const auto& b : context_blocks) {
    if (b.label.empty() || b.label.find_first_of("[]\n") != std::string::npos) {
      throw Error(ErrorCode::Validation, "invalid context block label '" + b.label + "'");
    }
    if (!labels.insert(b.label).second) {
      throw Error(ErrorCode::Validation, "duplicate context block label '" + b.label + "'");
    }
  }
}

std::string build_prompt(const PromptSpec& spec) {
  spec.validate();
  std::string out;
  out += kPhaseTag;
  out += to_string(spec.phase);
  out += '\n';
  out += kObjectiveTag;
  out += '\n';
  out += spec.objective;
  out += '\n';
  for (const auto& b : spec.context_blocks) {
    out += kContextTag;
    out += b.label;
    out += "]:\n";
    out += b.text;
    out += '\n';
  }
  out += kContractTag;
  out += spec.output_contract.token();
  out += "]:\n";
  out += contract_statement(spec.output_contract);
  out += '\n';
  return out;
}

const std::string* ParsedPrompt::block(std::string_view label) const {
  for (const auto& b : context_blocks) {
    if (b.label == label) return &b.text;
  }
  return nullptr;
}

ParsedPrompt parse_prompt(std::string_view prompt) {
  ParsedPrompt p;
  std::string* sink = nullptr;
  auto lines = lines_of(prompt);
  // A trailing newline terminates the last line rather than adding an empty one.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  bool first_in_block = true;
  for (auto line : lines) {
    if (starts_with(line, kPhaseTag)) {
      p.phase = std::string(line.substr(kPhaseTag.size()));
      sink = nullptr;
      continue;
    }
    if (line == kObjectiveTag) {
      sink = &p.objective;
      first_in_block = true;
      continue;
    }
    if (starts_with(line, kContextTag) && line.size() > kContextTag.size() + 2 &&
        line.substr(line.size() - 2) == "]:") {
      p.context_blocks.push_back(
          {std::string(line.substr(kContextTag.size(), line.size() - kContextTag.size() - 2)),
           ""});
      sink = &p.context_blocks.back().text;
      first_in_block = true;
      continue;
    }
    if (starts_with(line, kContractTag) && line.size() > kContractTag.size() + 2 &&
        line.substr(line.size() - 2) == "]:") {
      p.contract_token =
          std::string(line.substr(kContractTag.size(), line.size() - kContractTag.size() - 2));
      sink = &p.contract_statement;
      first_in_block = true;
      continue;
    }
    if (line == kCorrectionTag) {
      sink = &p.correction;
      first_in_block = true;
      continue;
    }
    if (!sink) continue;
    if (!first_in_block) *sink += '\n';
    *sink += line;
    first_in_block = false;
  }
  return p;
}

std::variant<CandidateReply, std::string> parse_candidate_reply(std::string_view reply) {
  std::optional<std::string> sentence_line;
  std::array<std::optional<std::string>, 4> explanations;
  for (auto raw : lines_of(reply)) {
    auto line = text::trim(raw);
    if (starts_with(line, "SENTENCE:")) {
      if (sentence_line) return std::string("more than one SENTENCE line");
      sentence_line = std::string(text::trim(line.substr(9)));
      continue;
    }
    for (auto k : cnl::kSlotKinds) {
      auto prefix = kRationalePrefixes[cnl::index_of(k)];
      if (starts_with(line, prefix)) {
        auto& e = explanations[cnl::index_of(k)];
        if (e) return "more than one " + std::string(prefix.substr(0, prefix.size() - 1)) + " line";
        e = std::string(text::trim(line.substr(prefix.size())));
      }
    }
  }
  if (!sentence_line) return std::string("missing SENTENCE line");
  auto parsed = cnl::try_parse_sentence(*sentence_line, cnl::Register::Game);
  if (auto* err = std::get_if<cnl::ParseError>(&parsed)) {
    return "SENTENCE does not follow the template: " + err->describe();
  }
  std::array<std::string, 4> out;
  for (auto k : cnl::kSlotKinds) {
    const auto& e = explanations[cnl::index_of(k)];
    auto name = kRationalePrefixes[cnl::index_of(k)];
    name.remove_suffix(1);
    if (!e) return "missing " + std::string(name) + " rationale";
    if (e->empty()) return "empty " + std::string(name) + " rationale";
    out[cnl::index_of(k)] = *e;
  }
  return CandidateReply{std::get<cnl::ControlledSentence>(std::move(parsed)), std::move(out)};
}

std::string format_candidate_reply(const cnl::ControlledSentence& sentence,
                                   const std::array<std::string, 4>& explanations) {
  std::string out = "SENTENCE: " + cnl::render_canonical(sentence) + "\n";
  for (auto k : cnl::kSlotKinds) {
    out += kRationalePrefixes[cnl::index_of(k)];
    out += ' ';
    out += explanations[cnl::index_of(k)];
    out += '\n';
  }
  return out;
}

std::vector<std::string> parse_option_list(std::string_view reply) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto raw : lines_of(reply)) {
    auto line = text::trim(raw);
    if (!starts_with(line, "-")) continue;
    auto opt = std::string(text::trim(line.substr(1)));
    if (opt.empty()) continue;
    if (seen.insert(opt).second) out.push_back(std::move(opt));
  }
  return out;
}

std::optional<std::string> contract_violation(const OutputContract& contract,
                                              std::string_view reply) {
  auto body = text::trim(reply);
  switch (contract.kind) {
    case ContractKind::FreeText: {
      if (body.empty()) return "reply is empty";
      for (const auto& p : contract.required_phrases) {
        if (!text::contains_icase(body, p)) return "reply lacks the phrase \"" + p + "\"";
      }
      return std::nullopt;
    }
    case ContractKind::ControlledSentence: {
      auto parsed = cnl::try_parse_sentence(body, contract.reg);
      if (auto* err = std::get_if<cnl::ParseError>(&parsed)) {
        return "sentence does not follow the template: " + err->describe();
      }
      return std::nullopt;
    }
    case ContractKind::Candidate: {
      auto parsed = parse_candidate_reply(body);
      if (auto* err = std::get_if<std::string>(&parsed)) return *err;
      return std::nullopt;
    }
    case ContractKind::Pseudocode: {
      auto check = contract.source ? development::validate_pseudocode(body, *contract.source)
                                   : development::validate_pseudocode(body);
      if (!check.pass) return "pseudocode format: " + join(check.reasons, "; ");
      return std::nullopt;
    }
    case ContractKind::OptionList: {
      auto opts = parse_option_list(body);
      if (opts.size() < 2) return "fewer than two distinct options";
      if (opts.size() > 5) return "more than five options";
      return std::nullopt;
    }
  }
  return "unknown contract";
}

std::string corrective_suffix(const std::string& violation) {
  std::string out(kCorrectionTag);
  out += "\nYour previous reply was rejected: ";
  out += violation;
  out += ". Reply again and follow the output contract exactly.\n";
  return out;
}

Gateway::Gateway(std::shared_ptr<Provider> provider, RetryPolicy policy)
    : provider_(std::move(provider)), policy_(policy) {
  if (!provider_) throw Error(ErrorCode::Validation, "gateway needs a provider");
  if (policy_.max_attempts < 1) throw Error(ErrorCode::Validation, "max_attempts must be >= 1");
}

ProviderResult Gateway::complete(const PromptSpec& spec) const { return complete(spec, policy_); }

ProviderResult Gateway::complete(const PromptSpec& spec, const RetryPolicy& policy) const {
  if (policy.max_attempts < 1) throw Error(ErrorCode::Validation, "max_attempts must be >= 1");
  const std::string base = build_prompt(spec);
  std::string prompt = base;
  std::string last_violation;
  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    std::optional<std::string> reply;
    auto done = std::make_shared<std::promise<std::string>>();
    auto fut = done->get_future();
    // The worker owns everything it touches, so an abandoned (timed-out)
    // call can finish on its own.
    std::thread([provider = provider_, prompt, done] {
      try {
        done->set_value(provider->complete(prompt));
      } catch (...) {
        done->set_exception(std::current_exception());
      }
    }).detach();
    if (fut.wait_for(policy.per_attempt_timeout) != std::future_status::ready) {
      last_violation = "timed out after " + std::to_string(policy.per_attempt_timeout.count()) + " ms";
    } else {
      try {
        reply = fut.get();
      } catch (const std::exception& e) {
        last_violation = std::string("provider error: ") + e.what();
      }
    }
    if (reply) {
      if (auto v = contract_violation(spec.output_contract, *reply)) {
        last_violation = *v;
      } else {
        return {std::string(text::trim(*reply)), attempt, true, provider_->name()};
      }
    }
    prompt = base + corrective_suffix(last_violation);
  }
  throw Error(ErrorCode::ProviderFailure,
              "provider gave no valid reply in " + std::to_string(policy.max_attempts) +
                  " attempts: " + last_violation,
              {{"attempts", policy.max_attempts},
               {"last_violation", last_violation},
               {"provider", provider_->name()}});
}

std::vector<ScriptStep> parse_script(std::string_view spec) {
  std::vector<ScriptStep> out;
  std::string cur;
  auto flush = [&] {
    auto t = text::to_lower(text::trim(cur));
    cur.clear();
    if (t.empty()) return;
    if (t == "good") {
      out.push_back(ScriptStep::Good);
    } else if (t == "bad") {
      out.push_back(ScriptStep::Bad);
    } else {
      throw Error(ErrorCode::Validation, "script steps are 'good' or 'bad', got '" + t + "'");
    }
  };
  for (char c : spec) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

}  // namespace pedforge::llm

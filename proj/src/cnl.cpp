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

#include "pedforge/cnl.hpp"

#include <algorithm>

#include "pedforge/error.hpp"
#include "pedforge/text.hpp"

namespace pedforge::cnl {

namespace {

constexpr std::string_view kPlayers = "Players";
constexpr std::string_view kStudents = "(Students)";
constexpr std::string_view kIn = "in";
constexpr std::string_view kA = "a";
constexpr std::string_view kEnvironment = "environment";

struct Token {
  enum class Type { Word, Group, Period } type;
  std::string text;  // word text, or raw group content (untrimmed)
};

struct Tokenized {
  std::vector<Token> tokens;
  std::optional<ParseError> error;
};

ParseError malformed(std::string detail) {
  return {ParseErrorKind::MalformedFrame, std::nullopt, std::move(detail)};
}

ParseError extra(std::string detail) {
  return {ParseErrorKind::ExtraMaterial, std::nullopt, std::move(detail)};
}

ParseError missing(SlotKind k, std::string detail) {
  return {ParseErrorKind::MissingSlot, k, std::move(detail)};
}

Tokenized tokenize(std::string_view s) {
  Tokenized out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n' || c == '\r') {
      out.error = malformed("surface text must be a single line");
      return out;
    }
    if (text::is_space(c)) {
      ++i;
      continue;
    }
    if (c == '[') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != ']') {
        if (s[j] == '[') {
          out.error = ParseError{ParseErrorKind::NestedBracket, std::nullopt,
                                 "bracket opened inside a slot at offset " + std::to_string(j)};
          return out;
        }
        if (s[j] == '\n' || s[j] == '\r') {
          out.error = malformed("surface text must be a single line");
          return out;
        }
        ++j;
      }
      if (j == s.size()) {
        out.error = malformed("unterminated bracket at offset " + std::to_string(i));
        return out;
      }
      out.tokens.push_back({Token::Type::Group, std::string(s.substr(i + 1, j - i - 1))});
      i = j + 1;
      continue;
    }
    if (c == ']') {
      out.error = malformed("unmatched ']' at offset " + std::to_string(i));
      return out;
    }
    std::size_t j = i;
    while (j < s.size() && !text::is_space(s[j]) && s[j] != '[' && s[j] != ']' &&
           s[j] != '\n' && s[j] != '\r') {
      ++j;
    }
    std::string word(s.substr(i, j - i));
    if (word == ".") {
      out.tokens.push_back({Token::Type::Period, word});
    } else {
      out.tokens.push_back({Token::Type::Word, std::move(word)});
    }
    i = j;
  }
  return out;
}

bool is_word(const Token& t, std::string_view w) {
  return t.type == Token::Type::Word && t.text == w;
}

bool is_environment(const Token& t) {
  return t.type == Token::Type::Word &&
         (t.text == kEnvironment || t.text == std::string(kEnvironment) + ".");
}

std::string describe_token(const Token& t) {
  switch (t.type) {
    case Token::Type::Word: return "'" + t.text + "'";
    case Token::Type::Group: return "'[" + t.text + "]'";
    case Token::Type::Period: return "'.'";
  }
  return "token";
}

}  // namespace

std::string_view to_string(SlotKind k) {
  switch (k) {
    case SlotKind::Adverb: return "adverb";
    case SlotKind::Verb: return "verb";
    case SlotKind::Noun: return "noun";
    case SlotKind::Adjective: return "adjective";
  }
  return "adverb";
}

std::optional<SlotKind> slot_kind_from_string(std::string_view s) {
  auto lower = text::to_lower(s);
  for (auto k : kSlotKinds) {
    if (lower == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string_view slot_color(SlotKind k) {
  switch (k) {
    case SlotKind::Adverb: return "red";
    case SlotKind::Verb: return "yellow";
    case SlotKind::Noun: return "green";
    case SlotKind::Adjective: return "blue";
  }
  return "red";
}

std::string_view to_string(Register r) {
  return r == Register::Teaching ? "teaching" : "game";
}

std::optional<Register> register_from_string(std::string_view s) {
  auto lower = text::to_lower(s);
  if (lower == "teaching") return Register::Teaching;
  if (lower == "game") return Register::Game;
  return std::nullopt;
}

std::optional<std::string> slot_text_violation(std::string_view raw) {
  auto t = text::trim(raw);
  if (t.empty()) return "slot text is empty";
  if (t.find_first_of("[]") != std::string_view::npos) return "slot text contains a bracket";
  if (t.find_first_of("\r\n") != std::string_view::npos) return "slot text contains a line break";
  return std::nullopt;
}

ControlledSentence::ControlledSentence(Register reg, std::array<std::string, 4> slots)
    : register_(reg) {
  for (auto k : kSlotKinds) {
    auto& s = slots[index_of(k)];
    if (auto v = slot_text_violation(s)) {
      throw Error(ErrorCode::InvalidSlotText, std::string(to_string(k)) + ": " + *v,
                  {{"kind", std::string(to_string(k))}});
    }
    slots_[index_of(k)] = std::string(text::trim(s));
  }
}

ControlledSentence ControlledSentence::with_slot(SlotKind k, std::string_view t) const {
  auto copy = slots_;
  copy[index_of(k)] = std::string(t);
  return ControlledSentence(register_, std::move(copy));
}

std::string_view to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::MalformedFrame: return "MalformedFrame";
    case ParseErrorKind::MissingSlot: return "MissingSlot";
    case ParseErrorKind::ExtraMaterial: return "ExtraMaterial";
    case ParseErrorKind::NestedBracket: return "NestedBracket";
  }
  return "MalformedFrame";
}

std::string ParseError::describe() const {
  std::string out(to_string(kind));
  if (slot) out += "(" + std::string(to_string(*slot)) + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

ParseResult try_parse_sentence(std::string_view surface, Register reg) {
  auto tk = tokenize(surface);
  if (tk.error) return *tk.error;
  const auto& toks = tk.tokens;
  const std::size_t n = toks.size();

  // Anchors first: the fixed words decide whether this is the frame at all.
  std::size_t players = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_word(toks[i], kPlayers)) {
      players = i;
      break;
    }
  }
  if (players == n) return malformed("expected 'Players (Students)' at the start");
  if (players + 1 >= n || !is_word(toks[players + 1], kStudents)) {
    return malformed("expected '(Students)' after 'Players'");
  }
  std::size_t in_a = n;
  for (std::size_t i = players + 2; i + 1 < n; ++i) {
    if (is_word(toks[i], kIn) && is_word(toks[i + 1], kA)) {
      in_a = i;
      break;
    }
  }
  if (in_a == n) return malformed("expected 'in a' after the third slot");
  std::size_t env = n;
  for (std::size_t i = in_a + 2; i < n; ++i) {
    if (is_environment(toks[i])) {
      env = i;
      break;
    }
  }
  if (env == n) return malformed("expected 'environment' after the fourth slot");

  // Slot groups. Leading groups are right-aligned against Adverb/Verb/Noun,
  // so a sentence with only two groups is missing its Adverb.
  std::vector<const Token*> lead_groups;
  std::optional<const Token*> lead_stray;
  for (std::size_t i = players + 2; i < in_a; ++i) {
    if (toks[i].type == Token::Type::Group) {
      lead_groups.push_back(&toks[i]);
    } else if (!lead_stray) {
      lead_stray = &toks[i];
    }
  }
  std::vector<const Token*> tail_groups;
  std::optional<const Token*> tail_stray;
  for (std::size_t i = in_a + 2; i < env; ++i) {
    if (toks[i].type == Token::Type::Group) {
      tail_groups.push_back(&toks[i]);
    } else if (!tail_stray) {
      tail_stray = &toks[i];
    }
  }

  if (lead_groups.size() < 3) {
    return missing(SlotKind::Adverb, std::to_string(lead_groups.size()) +
                                         " bracket group(s) before 'in a', expected 3");
  }
  if (tail_groups.empty()) {
    return missing(SlotKind::Adjective, "no bracket group between 'in a' and 'environment'");
  }
  // With surplus leading groups the last three are the slots; the surplus is
  // reported as extra material below.
  const std::size_t skip = lead_groups.size() - 3;
  std::array<const Token*, 4> slot_tokens = {lead_groups[skip], lead_groups[skip + 1],
                                             lead_groups[skip + 2], tail_groups[0]};
  for (auto k : kSlotKinds) {
    if (text::trim(slot_tokens[index_of(k)]->text).empty()) {
      return missing(k, "empty bracket group");
    }
  }

  // Everything that is left over is material outside the frame.
  if (players > 0) return extra("text before 'Players': " + describe_token(toks[0]));
  if (lead_stray) return extra("unexpected " + describe_token(**lead_stray) + " before 'in a'");
  if (lead_groups.size() > 3) return extra("more than three bracket groups before 'in a'");
  if (tail_stray) {
    return extra("unexpected " + describe_token(**tail_stray) + " before 'environment'");
  }
  if (tail_groups.size() > 1) return extra("more than one bracket group after 'in a'");
  std::size_t rest = env + 1;
  if (toks[env].text == kEnvironment && rest < n && toks[rest].type == Token::Type::Period) {
    ++rest;
  }
  if (rest < n) return extra("text after 'environment': " + describe_token(toks[rest]));

  std::array<std::string, 4> slots;
  for (auto k : kSlotKinds) slots[index_of(k)] = std::string(text::trim(slot_tokens[index_of(k)]->text));
  return ControlledSentence(reg, std::move(slots));
}

ControlledSentence parse_sentence(std::string_view surface, Register reg) {
  auto r = try_parse_sentence(surface, reg);
  if (auto* e = std::get_if<ParseError>(&r)) {
    nlohmann::json detail = {{"kind", std::string(to_string(e->kind))}, {"detail", e->detail}};
    if (e->slot) detail["slot"] = std::string(to_string(*e->slot));
    throw Error(ErrorCode::ParseError, e->describe(), std::move(detail));
  }
  return std::get<ControlledSentence>(std::move(r));
}

std::string render_canonical(const ControlledSentence& s) {
  std::string out;
  out.reserve(64);
  out += "Players (Students) [";
  out += s.slot(SlotKind::Adverb);
  out += "] [";
  out += s.slot(SlotKind::Verb);
  out += "] [";
  out += s.slot(SlotKind::Noun);
  out += "] in a [";
  out += s.slot(SlotKind::Adjective);
  out += "] environment.";
  return out;
}

DisplayText render_display(const ControlledSentence& s) {
  DisplayText d;
  auto put = [&d, &s](SlotKind k) {
    d.ranges.push_back({d.text.size(), s.slot(k).size(), k});
    d.text += s.slot(k);
  };
  d.text = "Players (Students) ";
  put(SlotKind::Adverb);
  d.text += ' ';
  put(SlotKind::Verb);
  d.text += ' ';
  put(SlotKind::Noun);
  d.text += " in a ";
  put(SlotKind::Adjective);
  d.text += " environment.";
  return d;
}

std::string render_sentence(const ControlledSentence& s, RenderMode mode) {
  return mode == RenderMode::Canonical ? render_canonical(s) : render_display(s).text;
}

bool SlotDiff::empty() const {
  return std::all_of(changes.begin(), changes.end(),
                     [](const SlotChange& c) { return std::holds_alternative<Unchanged>(c); });
}

std::vector<SlotKind> SlotDiff::changed_kinds() const {
  std::vector<SlotKind> out;
  for (auto k : kSlotKinds) {
    if (changed(k)) out.push_back(k);
  }
  return out;
}

SlotDiff diff_sentences(const ControlledSentence& a, const ControlledSentence& b) {
  if (a.reg() != b.reg()) {
    throw Error(ErrorCode::RegisterMismatch,
                "cannot diff a " + std::string(to_string(a.reg())) + " sentence against a " +
                    std::string(to_string(b.reg())) + " sentence");
  }
  SlotDiff d;
  for (auto k : kSlotKinds) {
    // Slot texts are stored trimmed, so this is the trimmed comparison.
    if (a.slot(k) == b.slot(k)) {
      d.changes[index_of(k)] = Unchanged{};
    } else {
      d.changes[index_of(k)] = Changed{a.slot(k), b.slot(k)};
    }
  }
  return d;
}

nlohmann::json to_json(const ControlledSentence& s) {
  nlohmann::json j;
  j["register"] = std::string(to_string(s.reg()));
  for (auto k : kSlotKinds) j[std::string(to_string(k))] = s.slot(k);
  return j;
}

ControlledSentence sentence_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Validation, "sentence must be an object");
  auto reg = register_from_string(j.value("register", ""));
  if (!reg) throw Error(ErrorCode::Validation, "sentence register must be 'teaching' or 'game'");
  std::array<std::string, 4> slots;
  for (auto k : kSlotKinds) {
    auto key = std::string(to_string(k));
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::Validation, "sentence is missing slot '" + key + "'");
    }
    slots[index_of(k)] = j[key].get<std::string>();
  }
  return ControlledSentence(*reg, std::move(slots));
}

nlohmann::json to_json(const DisplayText& d) {
  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& r : d.ranges) {
    ranges.push_back({{"offset", r.offset},
                      {"length", r.length},
                      {"kind", std::string(to_string(r.kind))},
                      {"color", std::string(slot_color(r.kind))}});
  }
  return {{"text", d.text}, {"ranges", ranges}};
}

}  // namespace pedforge::cnl

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

// Controlled four-slot sentence language.
//
// Canonical surface form:
//
//   Players (Students) [<adverb>] [<verb>] [<noun>] in a [<adjective>] environment.
//
// The fixed words are matched case-sensitively; whitespace between tokens is
// flexible on input and normalized to single spaces on output. The final
// period is optional when parsing and always emitted when rendering.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pedforge::cnl {

enum class SlotKind { Adverb = 0, Verb = 1, Noun = 2, Adjective = 3 };

inline constexpr std::array<SlotKind, 4> kSlotKinds = {
    SlotKind::Adverb, SlotKind::Verb, SlotKind::Noun, SlotKind::Adjective};

inline constexpr std::size_t index_of(SlotKind k) { return static_cast<std::size_t>(k); }

/// Lowercase token: "adverb", "verb", "noun", "adjective".
std::string_view to_string(SlotKind k);
std::optional<SlotKind> slot_kind_from_string(std::string_view s);

/// Display color: Adverb=red, Verb=yellow, Noun=green, Adjective=blue.
std::string_view slot_color(SlotKind k);

enum class Register { Teaching, Game };

std::string_view to_string(Register r);
std::optional<Register> register_from_string(std::string_view s);

/// Returns the reason a slot text is invalid, or nullopt if it is a valid
/// fill. Valid fills are nonempty after trimming and contain no brackets or
/// line breaks.
std::optional<std::string> slot_text_violation(std::string_view text);

/// A four-slot sentence in one register. Slot texts are stored trimmed.
/// Construction validates every slot; an invalid value cannot exist.
class ControlledSentence {
 public:
  /// Throws Error(InvalidSlotText) naming the first offending slot.
  ControlledSentence(Register reg, std::array<std::string, 4> slots);

  Register reg() const noexcept { return register_; }
  const std::string& slot(SlotKind k) const { return slots_[index_of(k)]; }
  const std::array<std::string, 4>& slots() const noexcept { return slots_; }

  /// Copy with one slot replaced. Throws Error(InvalidSlotText).
  ControlledSentence with_slot(SlotKind k, std::string_view text) const;

  friend bool operator==(const ControlledSentence&, const ControlledSentence&) = default;

 private:
  Register register_;
  std::array<std::string, 4> slots_;
};

enum class ParseErrorKind { MalformedFrame, MissingSlot, ExtraMaterial, NestedBracket };

std::string_view to_string(ParseErrorKind k);

struct ParseError {
  ParseErrorKind kind;
  std::optional<SlotKind> slot;  // set for MissingSlot
  std::string detail;

  /// e.g. "MissingSlot(adverb): ..." -- used for corrective prompts.
  std::string describe() const;
};

using ParseResult = std::variant<ControlledSentence, ParseError>;

/// Parses one line of canonical surface text. Never throws.
ParseResult try_parse_sentence(std::string_view surface, Register reg);

/// Throwing variant: Error(ParseError) with the ParseError in the detail.
ControlledSentence parse_sentence(std::string_view surface, Register reg);

enum class RenderMode { Canonical, Display };

struct ColorRange {
  std::size_t offset;
  std::size_t length;
  SlotKind kind;
  friend bool operator==(const ColorRange&, const ColorRange&) = default;
};

struct DisplayText {
  std::string text;
  std::vector<ColorRange> ranges;  // one per kind, ordered by offset
};

std::string render_canonical(const ControlledSentence& s);
DisplayText render_display(const ControlledSentence& s);

/// Canonical mode returns the bracketed frame; Display mode returns the
/// bracket-free text (use render_display for the color ranges).
std::string render_sentence(const ControlledSentence& s, RenderMode mode);

struct Unchanged {
  friend bool operator==(const Unchanged&, const Unchanged&) = default;
};
struct Changed {
  std::string old_text;
  std::string new_text;
  friend bool operator==(const Changed&, const Changed&) = default;
};
using SlotChange = std::variant<Unchanged, Changed>;

struct SlotDiff {
  std::array<SlotChange, 4> changes;

  const SlotChange& at(SlotKind k) const { return changes[index_of(k)]; }
  bool changed(SlotKind k) const { return std::holds_alternative<Changed>(at(k)); }
  bool empty() const;
  std::vector<SlotKind> changed_kinds() const;
};

/// Throws Error(RegisterMismatch) when registers differ.
SlotDiff diff_sentences(const ControlledSentence& a, const ControlledSentence& b);

// Project file form: {"register": "teaching", "adverb": ..., "verb": ...,
// "noun": ..., "adjective": ...}
nlohmann::json to_json(const ControlledSentence& s);
ControlledSentence sentence_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DisplayText& d);

}  // namespace pedforge::cnl

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

// Offline provider. Replies are assembled from fixed templates; the only
// inputs are the seed and the prompt text, so identical requests always get
// identical replies. The templates are test fixtures: changing any string
// here changes frozen expectations in tests/.

#include <mutex>
#include <regex>

#include "pedforge/error.hpp"
#include "pedforge/gateway.hpp"
#include "pedforge/mapping.hpp"
#include "pedforge/pseudocode.hpp"
#include "pedforge/text.hpp"

namespace pedforge::llm {

namespace {

using cnl::ControlledSentence;
using cnl::SlotKind;

// 16 x 16 flavor pairs: index = (seed + prompt hash + 37 * variant) mod 256,
// so replies are pairwise distinct across any 256 consecutive seeds.
constexpr std::array<std::string_view, 16> kRoundWords = {
    "bronze", "silver", "golden", "sunrise", "midnight", "harbor", "summit",  "meadow",
    "lantern", "comet", "river",  "canyon",  "orchard",  "glacier", "ember", "tidal"};
constexpr std::array<std::string_view, 16> kMoodWords = {
    "cozy",   "bright", "misty",  "bustling", "quiet", "vivid", "breezy", "sunlit",
    "moonlit", "rustic", "sleek", "whimsical", "calm", "lively", "snowy", "earthy"};

constexpr std::array<std::string_view, 16> kTopics = {
    "fraction equivalence", "photosynthesis",      "plate tectonics",   "persuasive writing",
    "supply and demand",    "cell division",       "chemical bonding",  "the water cycle",
    "linear equations",     "ancient trade routes", "probability basics", "circuit design",
    "climate systems",      "poetic meter",        "map reading",       "data literacy"};

// Generic sentence word lists, used when a sentence contract arrives
// without a draft or an instruction.
constexpr std::array<std::string_view, 8> kAdverbs = {
    "accurately", "quickly", "carefully", "independently",
    "collaboratively", "fluently", "precisely", "confidently"};
constexpr std::array<std::string_view, 8> kVerbs = {
    "classify", "compare", "predict", "explain", "sort", "measure", "design", "debug"};
constexpr std::array<std::string_view, 8> kNouns = {
    "rock samples", "fractions", "food webs", "historical sources",
    "chemical reactions", "sentence structures", "force diagrams", "map coordinates"};
constexpr std::array<std::string_view, 8> kAdjectives = {
    "realistic fieldwork", "playful classroom", "stylized laboratory", "abstract puzzle",
    "collaborative studio", "calm museum", "busy marketplace", "quiet library"};

struct Archetype {
  std::string_view name;
  std::string_view adverb;     // {adv} {round}
  std::string_view verb;       // {verb}
  std::string_view noun;       // {noun}
  std::string_view adjective;  // {mood} {adj}
};

constexpr std::array<Archetype, 3> kArchetypes = {{
    {"sorting task", "{adv}, scored per {round} sorting round", "drag and sort cards to {verb}",
     "{noun} cards and labeled bins", "{mood} {adj} sorting hall"},
    {"timed quiz-quest", "{adv}, before the {round} quest timer runs out",
     "answer quest challenges to {verb}", "{noun} quest challenges", "{mood} {adj} quest map"},
    {"simulation-inspection", "{adv}, across {round} inspection shifts",
     "inspect simulated cases to {verb}", "{noun} specimens in a simulation",
     "{mood} {adj} simulation lab"},
}};

std::string fill(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& vars) {
  std::string out(tmpl);
  for (const auto& [key, value] : vars) {
    std::string needle = "{" + key + "}";
    for (auto pos = out.find(needle); pos != std::string::npos;
         pos = out.find(needle, pos + value.size())) {
      out.replace(pos, needle.size(), value);
    }
  }
  return out;
}

int parse_int(const std::string* s, int fallback) {
  if (!s) return fallback;
  try {
    return std::stoi(*s);
  } catch (...) {
    return fallback;
  }
}

std::string malformed_reply(const std::string& token) {
  if (token.rfind("controlled-sentence", 0) == 0 || token == "candidate") {
    return "Players (Students) [] [] [] in a [] environment.";
  }
  return "";
}

class MockProvider final : public Provider {
 public:
  MockProvider(std::uint64_t seed, std::vector<ScriptStep> script)
      : seed_(seed), script_(std::move(script)) {}

  std::string name() const override { return "mock:" + std::to_string(seed_); }

  std::string complete(const std::string& prompt) override {
    auto p = parse_prompt(prompt);
    if (next_step() == ScriptStep::Bad) return malformed_reply(p.contract_token);
    if (p.contract_token.rfind("controlled-sentence", 0) == 0) return sentence(p, prompt);
    if (p.contract_token == "candidate") return candidate(p);
    if (p.contract_token == "option-list") return options(p);
    if (p.contract_token == "pseudocode") return pseudocode(p);
    return free_text(p);
  }

 private:
  ScriptStep next_step() {
    std::lock_guard lock(mu_);
    if (cursor_ < script_.size()) return script_[cursor_++];
    return ScriptStep::Good;
  }

  std::size_t flavor(std::string_view basis, int variant) const {
    auto h = text::fnv1a(basis);
    return static_cast<std::size_t>((seed_ + h % 256 + 37u * static_cast<unsigned>(variant)) % 256);
  }

  std::string sentence(const ParsedPrompt& p, const std::string& prompt) const {
    auto reg = p.contract_token == "controlled-sentence:teaching" ? cnl::Register::Teaching
                                                                  : cnl::Register::Game;
    if (const auto* draft = p.block("Draft sentence")) return *draft;

    const auto* current = p.block("Current game sentence");
    const auto* instruction = p.block("Instruction");
    if (current && instruction) return refine(*current, *instruction);

    auto h = text::fnv1a(prompt, seed_);
    std::array<std::string, 4> slots = {
        std::string(kAdverbs[h % 8]), std::string(kVerbs[(h >> 8) % 8]),
        std::string(kNouns[(h >> 16) % 8]), std::string(kAdjectives[(h >> 24) % 8])};
    return cnl::render_canonical(ControlledSentence(reg, std::move(slots)));
  }

  // Instruction grammar:
  //   (change|set|make|replace|rewrite) [the] <kind> (to|with|into|as) <text>
  //   (regenerate|vary|redo) [the] <kind>
  // Anything else leaves the sentence as it is.
  std::string refine(const std::string& current, const std::string& instruction) const {
    auto parsed = cnl::try_parse_sentence(current, cnl::Register::Game);
    if (!std::holds_alternative<ControlledSentence>(parsed)) return current;
    const auto& s = std::get<ControlledSentence>(parsed);

    static const std::regex set_re(
        R"(^\s*(?:change|set|make|replace|rewrite)\s+(?:the\s+)?(adverb|verb|noun|adjective)s?\s+(?:to|with|into|as)\s+(.+?)\s*\.?\s*$)",
        std::regex::icase);
    static const std::regex regen_re(
        R"(^\s*(?:regenerate|vary|redo)\s+(?:the\s+)?(adverb|verb|noun|adjective)s?\b.*$)",
        std::regex::icase);
    std::smatch m;
    if (std::regex_match(instruction, m, set_re)) {
      auto kind = cnl::slot_kind_from_string(m[1].str());
      auto value = m[2].str();
      // Emit exactly what was asked for; the gateway rejects invalid slot text.
      auto slots = s.slots();
      slots[cnl::index_of(*kind)] = value;
      return "Players (Students) [" + slots[0] + "] [" + slots[1] + "] [" + slots[2] +
             "] in a [" + slots[3] + "] environment.";
    }
    if (std::regex_match(instruction, m, regen_re)) {
      auto kind = *cnl::slot_kind_from_string(m[1].str());
      auto f = flavor(current, 1);
      auto text = s.slot(kind) + " (" + std::string(kRoundWords[f % 16]) + " variant)";
      return cnl::render_canonical(s.with_slot(kind, text));
    }
    return cnl::render_canonical(s);
  }

  std::string candidate(const ParsedPrompt& p) const {
    const auto* ped_text = p.block("Pedagogy sentence");
    if (!ped_text) return "";
    auto parsed = cnl::try_parse_sentence(*ped_text, cnl::Register::Teaching);
    if (!std::holds_alternative<ControlledSentence>(parsed)) return "";
    const auto& ped = std::get<ControlledSentence>(parsed);

    int variant = parse_int(p.block("Candidate variant"), 0);
    const auto& arch = kArchetypes[static_cast<std::size_t>(variant) % kArchetypes.size()];
    auto f = flavor(*ped_text, variant);
    std::vector<std::pair<std::string, std::string>> vars = {
        {"adv", ped.slot(SlotKind::Adverb)},
        {"verb", ped.slot(SlotKind::Verb)},
        {"noun", ped.slot(SlotKind::Noun)},
        {"adj", ped.slot(SlotKind::Adjective)},
        {"round", std::string(kRoundWords[f % 16])},
        {"mood", std::string(kMoodWords[f / 16])},
    };
    ControlledSentence game(cnl::Register::Game,
                            {fill(arch.adverb, vars), fill(arch.verb, vars), fill(arch.noun, vars),
                             fill(arch.adjective, vars)});
    std::array<std::string, 4> why;
    for (auto k : cnl::kSlotKinds) {
      why[cnl::index_of(k)] = std::string(mapping::mapping_row(k).game_meaning) + " In this " +
                              std::string(arch.name) + ", \"" + game.slot(k) +
                              "\" realizes the pedagogy " + std::string(cnl::to_string(k)) +
                              " \"" + ped.slot(k) + "\".";
    }
    return format_candidate_reply(game, why);
  }

  std::string options(const ParsedPrompt& p) const {
    const auto* field = p.block("Field");
    const auto* doc = p.block("Requirement document");
    const auto* concept_text = p.block("Concept");
    std::string basis = (field ? *field : "") + "|" + (doc ? *doc : "");
    auto f = flavor(basis, 0);
    std::string subject =
        concept_text && !concept_text->empty() ? *concept_text : std::string(kTopics[f % 16]);
    std::string key = field ? *field : "";

    std::array<std::string, 3> opts;
    if (key == "concept_scope") {
      opts = {subject + " for an introductory unit", subject + " within a single lesson",
              "common misconceptions about " + subject};
    } else if (key == "materials") {
      opts = {"a worked-example worksheet on " + subject,
              "a short video explainer about " + subject,
              "a set of practice problems covering " + subject};
    } else if (key == "observable_action") {
      opts = {"identify examples of " + subject, "classify cases of " + subject + " by type",
              "explain " + subject + " using a labeled diagram"};
    } else if (key == "performance_target") {
      auto hits = std::to_string(6 + f % 4);
      auto minutes = std::to_string(10 + 5 * (f % 3));
      opts = {"correctly answer " + hits + " of 10 items within " + minutes + " minutes",
              "reach " + std::to_string(70 + 5 * (f % 4)) + "% accuracy within 2 sessions",
              "complete " + std::to_string(3 + f % 3) + " challenges within 20 minutes"};
    } else if (key == "context") {
      opts = {"environment: classroom lab; realism: Stylized; tone: encouraging",
              "environment: field site; realism: Realistic; tone: investigative",
              "environment: " + std::string(kMoodWords[f / 16]) +
                  " fantasy kingdom; realism: Abstract; tone: playful"};
    } else {
      return "";
    }
    std::string out;
    for (const auto& o : opts) out += "- " + o + "\n";
    return out;
  }

  std::string pseudocode(const ParsedPrompt& p) const {
    const auto* game = p.block("Game sentence");
    if (!game) return "";
    auto parsed = cnl::try_parse_sentence(*game, cnl::Register::Game);
    if (!std::holds_alternative<ControlledSentence>(parsed)) return "";
    return development::pseudocode_template(std::get<ControlledSentence>(parsed));
  }

  std::string free_text(const ParsedPrompt& p) const {
    if (const auto* game = p.block("Game sentence")) {
      auto parsed = cnl::try_parse_sentence(*game, cnl::Register::Game);
      if (std::holds_alternative<ControlledSentence>(parsed)) {
        return development::paragraph_template(std::get<ControlledSentence>(parsed));
      }
    }
    return "Noted: " + p.objective;
  }

  std::uint64_t seed_;
  std::vector<ScriptStep> script_;
  std::size_t cursor_ = 0;
  std::mutex mu_;
};

}  // namespace

std::shared_ptr<Provider> mock_provider(std::uint64_t seed, std::vector<ScriptStep> script) {
  return std::make_shared<MockProvider>(seed, std::move(script));
}

}  // namespace pedforge::llm

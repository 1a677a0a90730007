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

#include "pedforge/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "pedforge/error.hpp"
#include "pedforge/text.hpp"

namespace pedforge::extraction {

namespace {

#include "catalog_text.inc"  // defines kCatalogText

constexpr std::array<std::string_view, 5> kFieldNames = {
    "concept_scope", "materials", "observable_action", "performance_target", "context"};

// Words ending in -ly that are not quality adverbs.
constexpr std::array<std::string_view, 10> kNotQualityAdverbs = {
    "only", "apply", "reply", "supply", "family", "early", "daily", "weekly", "hourly", "monthly"};

// Clause boundaries used to cut a leading phrase out of an answer.
constexpr std::array<std::string_view, 11> kPhraseDelimiters = {
    ",", ";", ":", " for ", " at ", " with ", " within ", " during ", " using ", " among ", " in grade"};

std::string leading_phrase(std::string_view answer) {
  std::string s(text::trim(answer));
  while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
  auto lower = text::to_lower(s);
  std::size_t cut = s.size();
  for (auto d : kPhraseDelimiters) {
    auto pos = lower.find(d);
    if (pos != std::string::npos && pos > 0) cut = std::min(cut, pos);
  }
  return std::string(text::trim(std::string_view(s).substr(0, cut)));
}

std::string strip_to(std::string_view s) {
  auto t = text::trim(s);
  if (t.size() > 3 && text::to_lower(t.substr(0, 3)) == "to ") t.remove_prefix(3);
  return std::string(text::trim(t));
}

std::string unit_alternation(const Catalog& c) {
  auto units = c.time_units;
  // Longest first so "minutes" wins over "minute".
  std::sort(units.begin(), units.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  std::string alt;
  for (const auto& u : units) {
    if (!alt.empty()) alt += '|';
    alt += u;
  }
  return alt;
}

}  // namespace

std::string_view to_string(RequirementField f) { return kFieldNames[index_of(f)]; }

std::optional<RequirementField> field_from_string(std::string_view s) {
  for (auto f : kFields) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::string_view default_catalog_text() { return kCatalogText; }

Catalog Catalog::parse(std::string_view content) {
  Catalog c;
  std::array<bool, 5> have_question{};
  std::array<bool, 3> have_sub{};
  std::string section;
  std::string* sink = nullptr;
  std::vector<std::string>* list = nullptr;

  std::istringstream in{std::string(content)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      sink = nullptr;
      list = nullptr;
      auto words = text::split_words(section);
      if (words.size() == 2 && words[0] == "question") {
        auto f = field_from_string(words[1]);
        if (!f) throw Error(ErrorCode::Validation, "catalog: unknown field '" + words[1] + "'");
        have_question[index_of(*f)] = true;
        sink = &c.questions[index_of(*f)];
      } else if (words.size() == 2 && words[0] == "context") {
        static constexpr std::array<std::string_view, 3> parts = {"environment", "realism", "tone"};
        auto it = std::find(parts.begin(), parts.end(), words[1]);
        if (it == parts.end()) {
          throw Error(ErrorCode::Validation, "catalog: unknown context part '" + words[1] + "'");
        }
        auto i = static_cast<std::size_t>(it - parts.begin());
        have_sub[i] = true;
        sink = &c.context_subprompts[i];
      } else if (section == "non_observable_verbs") {
        list = &c.non_observable_verbs;
      } else if (section == "time_units") {
        list = &c.time_units;
      } else {
        throw Error(ErrorCode::Validation, "catalog: unknown section [" + section + "]");
      }
      continue;
    }
    if (sink) {
      if (!sink->empty()) *sink += ' ';
      *sink += line;
    } else if (list) {
      list->push_back(text::to_lower(line));
    } else {
      throw Error(ErrorCode::Validation,
                  "catalog line " + std::to_string(lineno) + " is outside any section");
    }
  }
  for (auto f : kFields) {
    if (!have_question[index_of(f)] || c.questions[index_of(f)].empty()) {
      throw Error(ErrorCode::Validation,
                  "catalog: missing question for " + std::string(to_string(f)));
    }
  }
  if (!std::all_of(have_sub.begin(), have_sub.end(), [](bool b) { return b; })) {
    throw Error(ErrorCode::Validation, "catalog: context needs environment, realism and tone");
  }
  if (c.time_units.empty()) throw Error(ErrorCode::Validation, "catalog: no time units");
  return c;
}

const Catalog& Catalog::defaults() {
  static const Catalog c = parse(kCatalogText);
  return c;
}

Catalog Catalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Validation, "cannot read catalog file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string_view to_string(Realism r) {
  switch (r) {
    case Realism::Abstract: return "Abstract";
    case Realism::Stylized: return "Stylized";
    case Realism::Realistic: return "Realistic";
  }
  return "Stylized";
}

std::string format_context(const ContextValue& c) {
  return "environment: " + c.environment_type + "; realism: " +
         std::string(to_string(c.realism_level)) + "; tone: " + c.tone;
}

std::optional<PerformanceTargetValue> parse_performance_target(std::string_view answer,
                                                               const Catalog& catalog) {
  std::string s(text::trim(answer));
  const std::regex window_re("(\\d+(?:\\.\\d+)?)\\s*(" + unit_alternation(catalog) + ")\\b",
                             std::regex::icase);
  std::smatch wm;
  if (!std::regex_search(s, wm, window_re)) return std::nullopt;

  PerformanceTargetValue v;
  v.description = s;
  v.time_window = {std::stod(wm[1].str()), wm[2].str(), wm[1].str() + " " + wm[2].str()};
  const auto window_begin = static_cast<std::size_t>(wm.position(0));
  const auto window_end = window_begin + static_cast<std::size_t>(wm.length(0));

  static const std::regex pct_re(R"((\d+(?:\.\d+)?)\s*%)");
  static const std::regex ratio_re(R"((\d+(?:\.\d+)?)\s+(?:out\s+of|of)\s+(\d+(?:\.\d+)?))",
                                   std::regex::icase);
  static const std::regex num_re(R"(\d+(?:\.\d+)?)");
  std::smatch m;
  if (std::regex_search(s, m, pct_re)) {
    v.quantity = Quantity{std::stod(m[1].str()), "percentage", m[1].str() + "%"};
  } else if (std::regex_search(s, m, ratio_re)) {
    v.quantity = Quantity{std::stod(m[1].str()), "count", m[1].str() + " of " + m[2].str()};
  } else {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), num_re); it != std::sregex_iterator();
         ++it) {
      auto pos = static_cast<std::size_t>(it->position(0));
      if (pos >= window_begin && pos < window_end) continue;
      v.quantity = Quantity{std::stod(it->str()), "count", it->str()};
      break;
    }
  }

  for (const auto& w : text::split_words(s)) {
    std::string word;
    for (char c : w) {
      if (std::isalpha(static_cast<unsigned char>(c))) word += c;
    }
    word = text::to_lower(word);
    if (word.size() >= 4 && word.substr(word.size() - 2) == "ly" &&
        std::find(kNotQualityAdverbs.begin(), kNotQualityAdverbs.end(), word) ==
            kNotQualityAdverbs.end()) {
      v.quality_adverb = word;
      break;
    }
  }
  return v;
}

namespace {

struct ContextFacets {
  std::optional<std::string> environment, realism, tone;
};

ContextFacets split_context(std::string_view answer) {
  ContextFacets f;
  std::string part;
  auto flush = [&] {
    auto t = text::trim(part);
    auto sep = t.find_first_of(":=");
    if (sep != std::string_view::npos) {
      auto key = text::to_lower(text::trim(t.substr(0, sep)));
      std::replace(key.begin(), key.end(), '_', ' ');
      auto value = std::string(text::trim(t.substr(sep + 1)));
      if (key == "environment" || key == "environment type" || key == "setting") {
        f.environment = value;
      } else if (key == "realism" || key == "realism level") {
        f.realism = value;
      } else if (key == "tone" || key == "instructional tone") {
        f.tone = value;
      }
    }
    part.clear();
  };
  for (char c : answer) {
    if (c == ';' || c == '\n') {
      flush();
    } else {
      part += c;
    }
  }
  flush();
  return f;
}

std::optional<Realism> realism_from_string(std::string_view s) {
  auto r = text::to_lower(text::trim(s));
  if (r == "abstract") return Realism::Abstract;
  if (r == "stylized" || r == "stylised") return Realism::Stylized;
  if (r == "realistic") return Realism::Realistic;
  return std::nullopt;
}

}  // namespace

std::optional<ContextValue> parse_context(std::string_view answer) {
  auto f = split_context(answer);
  if (!f.environment || f.environment->empty() || !f.realism || !f.tone || f.tone->empty()) {
    return std::nullopt;
  }
  auto realism = realism_from_string(*f.realism);
  if (!realism) return std::nullopt;
  return ContextValue{*f.environment, *realism, *f.tone};
}

Specificity specificity_check(RequirementField field, std::string_view answer,
                              const Catalog& catalog) {
  Specificity out;
  auto fail = [&out](std::string reason) {
    out.pass = false;
    out.reasons.push_back(std::move(reason));
  };
  auto t = text::trim(answer);
  if (t.empty()) {
    fail("empty");
    return out;
  }
  if (t.find_first_of("[]") != std::string_view::npos) {
    fail("brackets are reserved for sentence slots");
  }

  switch (field) {
    case RequirementField::ConceptScope:
    case RequirementField::Materials:
      if (text::split_words(t).size() < 3) fail("fewer than 3 words");
      break;

    case RequirementField::ObservableAction: {
      auto action = text::to_lower(strip_to(t));
      auto words = text::split_words(action);
      bool denied = false;
      for (const auto& verb : catalog.non_observable_verbs) {
        if (action == verb || action.rfind(verb + " ", 0) == 0) denied = true;
        // Inflected single-word forms: "understands", "knowing".
        if (!words.empty() && verb.find(' ') == std::string::npos &&
            (words[0] == verb + "s" || words[0] == verb + "ing")) {
          denied = true;
        }
      }
      if (denied) fail("non-observable verb");
      break;
    }

    case RequirementField::PerformanceTarget: {
      bool has_number = std::any_of(t.begin(), t.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
      });
      bool has_unit = false;
      for (const auto& w : text::split_words(t)) {
        std::string word;
        for (char c : w) {
          if (std::isalpha(static_cast<unsigned char>(c))) word += c;
        }
        word = text::to_lower(word);
        if (std::find(catalog.time_units.begin(), catalog.time_units.end(), word) !=
            catalog.time_units.end()) {
          has_unit = true;
        }
      }
      if (!has_number) fail("no number");
      if (!has_unit) fail("no time unit (minutes, hours, sessions or weeks)");
      if (has_number && has_unit) {
        auto v = parse_performance_target(t, catalog);
        if (!v) {
          fail("time window needs a number before the time unit");
        } else {
          if (v->time_window.value <= 0) fail("time window must be positive");
          if (v->quantity && v->quantity->value <= 0) fail("quantity must be positive");
        }
      }
      break;
    }

    case RequirementField::Context: {
      auto f = split_context(t);
      if (!f.environment || f.environment->empty()) fail("missing environment type");
      if (!f.realism || text::trim(*f.realism).empty()) {
        fail("missing realism level");
      } else if (!realism_from_string(*f.realism)) {
        fail("realism level must be Abstract, Stylized or Realistic");
      }
      if (!f.tone || f.tone->empty()) fail("missing tone");
      break;
    }
  }
  return out;
}

bool RequirementDocument::passed(RequirementField f) const {
  const auto& e = entries_[index_of(f)];
  return e && e->specificity.pass;
}

bool RequirementDocument::complete() const {
  return std::all_of(kFields.begin(), kFields.end(), [this](auto f) { return passed(f); });
}

RequirementDocument RequirementDocument::with_answer(RequirementField field, std::string raw,
                                                     Specificity specificity) const {
  RequirementDocument copy = *this;
  copy.entries_[index_of(field)] = Answer{std::move(raw), std::move(specificity)};
  return copy;
}

nlohmann::json to_json(const RequirementDocument& doc) {
  nlohmann::json j = nlohmann::json::object();
  for (auto f : kFields) {
    const auto& e = doc.entry(f);
    if (!e) {
      j[std::string(to_string(f))] = {{"status", "unanswered"}};
    } else {
      j[std::string(to_string(f))] = {{"status", "answered"},
                                       {"raw", e->raw},
                                       {"pass", e->specificity.pass},
                                       {"reasons", e->specificity.reasons}};
    }
  }
  j["complete"] = doc.complete();
  return j;
}

RequirementDocument document_from_json(const nlohmann::json& j) {
  RequirementDocument doc;
  for (auto f : kFields) {
    auto key = std::string(to_string(f));
    if (!j.contains(key)) continue;
    const auto& e = j[key];
    if (e.value("status", "unanswered") != "answered") continue;
    doc = doc.with_answer(f, e.value("raw", ""),
                          Specificity{e.value("pass", false),
                                      e.value("reasons", std::vector<std::string>{})});
  }
  return doc;
}

NextQuestion next_question(const RequirementDocument& doc, const Catalog& catalog) {
  for (auto f : kFields) {
    if (!doc.passed(f)) {
      Question q{f, catalog.questions[index_of(f)], {}};
      if (f == RequirementField::Context) {
        q.subprompts.assign(catalog.context_subprompts.begin(), catalog.context_subprompts.end());
      }
      return q;
    }
  }
  return Complete{};
}

RequirementDocument ingest_answer(const RequirementDocument& doc, RequirementField field,
                                  std::string_view answer, const Catalog& catalog) {
  return doc.with_answer(field, std::string(answer), specificity_check(field, answer, catalog));
}

nlohmann::json to_json(const OptionSet& o) {
  return {{"field", std::string(to_string(o.field))}, {"options", o.options}};
}

std::string document_summary(const RequirementDocument& doc) {
  std::string out;
  for (auto f : kFields) {
    const auto& e = doc.entry(f);
    if (!e) continue;
    out += std::string(to_string(f)) + ": " + e->raw + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

OptionSet propose_options(RequirementField field, const RequirementDocument& doc,
                          const llm::Gateway& gateway, const Catalog& catalog) {
  llm::PromptSpec spec;
  spec.phase = llm::Phase::Extraction;
  spec.objective =
      "Propose two to five distinct candidate answers the instructor can pick from or revise "
      "for this requirement question.";
  spec.context_blocks.push_back({"Field", std::string(to_string(field))});
  spec.context_blocks.push_back({"Question", catalog.questions[index_of(field)]});
  spec.context_blocks.push_back({"Requirement document", document_summary(doc)});
  if (const auto& concept_text = doc.entry(RequirementField::ConceptScope)) {
    spec.context_blocks.push_back({"Concept", leading_phrase(concept_text->raw)});
  }
  spec.output_contract = llm::OutputContract::option_list();
  auto result = gateway.complete(spec);
  return OptionSet{field, llm::parse_option_list(result.raw_text)};
}

cnl::ControlledSentence draft_pedagogy_sentence(const RequirementDocument& doc,
                                                const Catalog& catalog) {
  if (!doc.complete()) {
    nlohmann::json pending = nlohmann::json::array();
    for (auto f : kFields) {
      if (!doc.passed(f)) pending.push_back(std::string(to_string(f)));
    }
    throw Error(ErrorCode::IncompleteDocument, "requirement document is not complete",
                {{"pending", pending}});
  }
  const auto& target_raw = doc.entry(RequirementField::PerformanceTarget)->raw;
  auto target = parse_performance_target(target_raw, catalog);
  auto context = parse_context(doc.entry(RequirementField::Context)->raw);
  if (!target || !context) {
    throw Error(ErrorCode::IncompleteDocument, "requirement answers could not be structured");
  }

  std::string adverb;
  if (target->quality_adverb) adverb = *target->quality_adverb + ", ";
  if (target->quantity) adverb += target->quantity->surface + " ";
  adverb += "within " + target->time_window.surface;

  auto verb = leading_phrase(strip_to(doc.entry(RequirementField::ObservableAction)->raw));
  auto noun = leading_phrase(doc.entry(RequirementField::ConceptScope)->raw);
  auto adjective = text::to_lower(to_string(context->realism_level)) + " " +
                   std::string(text::trim(context->environment_type));
  if (verb.empty()) verb = std::string(text::trim(doc.entry(RequirementField::ObservableAction)->raw));
  if (noun.empty()) noun = std::string(text::trim(doc.entry(RequirementField::ConceptScope)->raw));

  return cnl::ControlledSentence(cnl::Register::Teaching, {adverb, verb, noun, adjective});
}

cnl::ControlledSentence compose_pedagogy_sentence(const RequirementDocument& doc,
                                                  const llm::Gateway& gateway,
                                                  const Catalog& catalog) {
  auto draft = draft_pedagogy_sentence(doc, catalog);
  llm::PromptSpec spec;
  spec.phase = llm::Phase::Extraction;
  spec.objective =
      "Compose the single pedagogy sentence for this activity from the instructor's answers. "
      "Keep the instructor's wording; the draft shows how the answers fill the slots.";
  spec.context_blocks.push_back({"Requirement document", document_summary(doc)});
  spec.context_blocks.push_back({"Draft sentence", cnl::render_canonical(draft)});
  spec.output_contract = llm::OutputContract::sentence(cnl::Register::Teaching);
  auto result = gateway.complete(spec);
  return cnl::parse_sentence(result.raw_text, cnl::Register::Teaching);
}

}  // namespace pedforge::extraction

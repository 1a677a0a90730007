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

// Requirement elicitation: five questions asked in a fixed order, each
// answer gated by a deterministic specificity check, then composed into the
// teaching-register sentence.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pedforge/cnl.hpp"
#include "pedforge/gateway.hpp"

namespace pedforge::extraction {

enum class RequirementField { ConceptScope, Materials, ObservableAction, PerformanceTarget, Context };

inline constexpr std::array<RequirementField, 5> kFields = {
    RequirementField::ConceptScope, RequirementField::Materials,
    RequirementField::ObservableAction, RequirementField::PerformanceTarget,
    RequirementField::Context};

inline constexpr std::size_t index_of(RequirementField f) { return static_cast<std::size_t>(f); }

/// Snake-case token: "concept_scope", "materials", ...
std::string_view to_string(RequirementField f);
std::optional<RequirementField> field_from_string(std::string_view s);

/// Question wording and deny lists. Shipped as data/elicitation.txt; the
/// compiled-in defaults are identical to that file.
struct Catalog {
  std::array<std::string, 5> questions;
  std::array<std::string, 3> context_subprompts;  // environment, realism, tone
  std::vector<std::string> non_observable_verbs;
  std::vector<std::string> time_units;

  static const Catalog& defaults();
  /// Throws Error(Validation) on a malformed catalog.
  static Catalog parse(std::string_view text);
  static Catalog load(const std::string& path);
};

/// Text of the shipped catalog file.
std::string_view default_catalog_text();

enum class Realism { Abstract, Stylized, Realistic };
std::string_view to_string(Realism r);

struct Quantity {
  double value = 0;
  std::string unit;     // "count" or "percentage"
  std::string surface;  // as written, e.g. "8 of 10" or "80%"
};

struct TimeWindow {
  double value = 0;
  std::string unit;     // time unit token as written, e.g. "minutes"
  std::string surface;  // e.g. "15 minutes"
};

struct PerformanceTargetValue {
  std::string description;
  std::optional<Quantity> quantity;
  TimeWindow time_window;
  std::optional<std::string> quality_adverb;  // e.g. "accurately"
};

struct ContextValue {
  std::string environment_type;
  Realism realism_level = Realism::Stylized;
  std::string tone;
};

/// "environment: <..>; realism: <Abstract|Stylized|Realistic>; tone: <..>"
std::string format_context(const ContextValue& c);

struct Specificity {
  bool pass = true;
  std::vector<std::string> reasons;
  friend bool operator==(const Specificity&, const Specificity&) = default;
};

Specificity specificity_check(RequirementField field, std::string_view answer,
                              const Catalog& catalog = Catalog::defaults());

std::optional<PerformanceTargetValue> parse_performance_target(
    std::string_view answer, const Catalog& catalog = Catalog::defaults());
std::optional<ContextValue> parse_context(std::string_view answer);

struct Answer {
  std::string raw;
  Specificity specificity;
  friend bool operator==(const Answer&, const Answer&) = default;
};

class RequirementDocument {
 public:
  const std::optional<Answer>& entry(RequirementField f) const { return entries_[index_of(f)]; }
  bool passed(RequirementField f) const;
  bool complete() const;

  /// Copy with `field` answered. Re-answering overwrites; other fields are
  /// untouched.
  RequirementDocument with_answer(RequirementField field, std::string raw,
                                  Specificity specificity) const;

  friend bool operator==(const RequirementDocument&, const RequirementDocument&) = default;

 private:
  std::array<std::optional<Answer>, 5> entries_;
};

nlohmann::json to_json(const RequirementDocument& doc);
RequirementDocument document_from_json(const nlohmann::json& j);

struct Question {
  RequirementField field;
  std::string prompt;
  std::vector<std::string> subprompts;  // Context only
};
struct Complete {};
using NextQuestion = std::variant<Question, Complete>;

NextQuestion next_question(const RequirementDocument& doc,
                           const Catalog& catalog = Catalog::defaults());

RequirementDocument ingest_answer(const RequirementDocument& doc, RequirementField field,
                                  std::string_view answer,
                                  const Catalog& catalog = Catalog::defaults());

struct OptionSet {
  RequirementField field;
  std::vector<std::string> options;  // 2..5, pairwise distinct
};

nlohmann::json to_json(const OptionSet& o);

/// Asks the gateway for candidate answers. Throws Error(ProviderFailure).
OptionSet propose_options(RequirementField field, const RequirementDocument& doc,
                          const llm::Gateway& gateway,
                          const Catalog& catalog = Catalog::defaults());

/// Deterministic slot fill derived from the answers:
///   Adverb    <- [quality adverb ", "] quantity " within " time window
///   Verb      <- leading verb phrase of the observable action
///   Noun      <- concept phrase of the concept scope
///   Adjective <- realism level + " " + environment type
/// Throws Error(IncompleteDocument).
cnl::ControlledSentence draft_pedagogy_sentence(const RequirementDocument& doc,
                                                const Catalog& catalog = Catalog::defaults());

/// Gateway-backed composition; the draft is sent as guidance. The result
/// always parses as a teaching sentence. Throws Error(IncompleteDocument)
/// or Error(ProviderFailure).
cnl::ControlledSentence compose_pedagogy_sentence(const RequirementDocument& doc,
                                                  const llm::Gateway& gateway,
                                                  const Catalog& catalog = Catalog::defaults());

/// "field: answer" lines for answered fields, in question order.
std::string document_summary(const RequirementDocument& doc);

}  // namespace pedforge::extraction

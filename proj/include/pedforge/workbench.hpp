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

// The co-design workflow over one project store. Each mutating call checks
// its preconditions against the latest state, consults the gateway when
// needed, and commits the outcome as events. Results are JSON views ready
// for the wire.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedforge/extraction.hpp"
#include "pedforge/gateway.hpp"
#include "pedforge/project_store.hpp"

namespace pedforge::service {

class Workbench {
 public:
  Workbench(store::ProjectStore& store, llm::Gateway gateway,
            extraction::Catalog catalog = extraction::Catalog::defaults());

  std::string create_project();
  nlohmann::json project(const std::string& id);
  nlohmann::json question(const std::string& id);
  nlohmann::json answer(const std::string& id, const std::string& field, const std::string& text);
  nlohmann::json options(const std::string& id, const std::string& field);

  nlohmann::json compose_pedagogy(const std::string& id);
  nlohmann::json edit_pedagogy_slot(const std::string& id, const std::string& kind,
                                    const std::string& text);

  nlohmann::json generate_candidates(const std::string& id, int n);
  nlohmann::json author_candidate(const std::string& id, const nlohmann::json& body);
  nlohmann::json regenerate_slot(const std::string& id, const std::string& cid,
                                 const std::string& kind);
  nlohmann::json edit_candidate_slot(const std::string& id, const std::string& cid,
                                     const std::string& kind, const std::string& text,
                                     const std::optional<std::string>& rationale);
  nlohmann::json accept(const std::string& id, const std::string& cid);

  nlohmann::json refine(const std::string& id, const std::string& instruction);
  nlohmann::json zoom(const std::string& id, const std::string& aid);
  /// Plain-text export of an artifact's content.
  std::string export_artifact(const std::string& id, const std::string& aid);

  nlohmann::json advance_phase(const std::string& id, const std::string& target);
  nlohmann::json trace(const std::string& id, const std::string& ref);
  nlohmann::json events(const std::string& id, std::int64_t since = 0);

  const extraction::Catalog& catalog() const noexcept { return catalog_; }
  const llm::Gateway& gateway() const noexcept { return gateway_; }

 private:
  store::ProjectStore& store_;
  llm::Gateway gateway_;
  extraction::Catalog catalog_;
};

}  // namespace pedforge::service

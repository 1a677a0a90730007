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

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pedforge/store.hpp"

namespace pedforge::store {

/// Immutable view of one project at one point of its log.
struct Snapshot {
  std::shared_ptr<const ProjectState> state;
  std::shared_ptr<const std::vector<ProjectEvent>> log;
  std::vector<std::string> warnings;
};

/// Project files under one data directory, one "<id>.pedforge.json" each.
///
/// The directory is locked for the lifetime of the store so that a single
/// process owns it. Writers to one project are serialized; readers get
/// immutable snapshots and never wait for a writer.
class ProjectStore {
 public:
  /// Creates the directory if needed. Throws Error(ProjectLocked) when
  /// another process holds it and Error(StorageFailure) when unusable.
  explicit ProjectStore(std::string data_dir);
  ~ProjectStore();
  ProjectStore(const ProjectStore&) = delete;
  ProjectStore& operator=(const ProjectStore&) = delete;

  const std::string& data_dir() const noexcept { return dir_; }

  /// New empty project with a fresh random id.
  std::string create();

  /// Throws Error(NotFound) or Error(CorruptFile).
  Snapshot snapshot(const std::string& id);

  /// Runs `decide` under the project's writer lock against the latest state
  /// and durably appends whatever it returns, all or nothing. Returns the
  /// stored events.
  using Decider = std::function<std::vector<PendingEvent>(const ProjectState&)>;
  std::vector<ProjectEvent> mutate(const std::string& id, const Decider& decide);

  std::string path_of(const std::string& id) const;

 private:
  struct Entry {
    std::mutex writer;
    std::mutex publish;
    std::string created;
    std::shared_ptr<const ProjectState> state;
    std::shared_ptr<const std::vector<ProjectEvent>> log;
    std::vector<std::string> warnings;
  };

  std::shared_ptr<Entry> entry(const std::string& id);

  std::string dir_;
  int lock_fd_ = -1;
  std::mutex entries_mu_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

/// True for ids this store could have issued (12 lowercase hex digits).
bool valid_project_id(std::string_view id);

}  // namespace pedforge::store

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

#include "pedforge/project_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pedforge/error.hpp"

namespace pedforge::store {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  auto secs = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string random_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  auto v = rng();
  for (int i = 0; i < 12; ++i) {
    id += kHex[v & 0xf];
    v >>= 4;
  }
  return id;
}

}  // namespace

bool valid_project_id(std::string_view id) {
  if (id.size() != 12) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

ProjectStore::ProjectStore(std::string data_dir) : dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw Error(ErrorCode::StorageFailure, "cannot use data directory '" + dir_ + "'",
                {{"path", dir_}});
  }
  auto lock_path = (fs::path(dir_) / ".lock").string();
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) {
    throw Error(ErrorCode::StorageFailure,
                "cannot open lock file '" + lock_path + "': " + std::strerror(errno),
                {{"path", lock_path}});
  }
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw Error(ErrorCode::ProjectLocked, "data directory '" + dir_ + "' is in use by another process",
                {{"path", dir_}});
  }
}

ProjectStore::~ProjectStore() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

std::string ProjectStore::path_of(const std::string& id) const {
  return (fs::path(dir_) / (id + ".pedforge.json")).string();
}

std::string ProjectStore::create() {
  std::string id;
  do {
    id = random_id();
  } while (fs::exists(path_of(id)));
  auto e = std::make_shared<Entry>();
  e->created = utc_now();
  auto state = std::make_shared<ProjectState>();
  state->id = id;
  e->state = state;
  e->log = std::make_shared<const std::vector<ProjectEvent>>();
  write_file_atomic(path_of(id), serialize_project({id, e->created, {}}, *state));
  std::lock_guard lk(entries_mu_);
  entries_[id] = e;
  return id;
}

std::shared_ptr<ProjectStore::Entry> ProjectStore::entry(const std::string& id) {
  std::lock_guard lk(entries_mu_);
  if (auto it = entries_.find(id); it != entries_.end()) return it->second;
  auto path = path_of(id);
  if (!valid_project_id(id) || !fs::exists(path)) {
    throw Error(ErrorCode::NotFound, "no project '" + id + "'", {{"project", id}});
  }
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw Error(ErrorCode::StorageFailure, "cannot read '" + path + "'", {{"path", path}});
  }
  auto loaded = parse_project(buf.str());
  if (loaded.file.id != id) {
    throw Error(ErrorCode::CorruptFile, "project file names a different project id",
                {{"project", id}, {"file_project", loaded.file.id}});
  }
  auto e = std::make_shared<Entry>();
  e->created = loaded.file.created;
  e->state = std::make_shared<const ProjectState>(std::move(loaded.state));
  e->log = std::make_shared<const std::vector<ProjectEvent>>(std::move(loaded.file.events));
  e->warnings = std::move(loaded.warnings);
  entries_[id] = e;
  return e;
}

Snapshot ProjectStore::snapshot(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lk(e->publish);
  return {e->state, e->log, e->warnings};
}

std::vector<ProjectEvent> ProjectStore::mutate(const std::string& id, const Decider& decide) {
  auto e = entry(id);
  std::lock_guard writer(e->writer);
  std::shared_ptr<const ProjectState> base;
  std::shared_ptr<const std::vector<ProjectEvent>> base_log;
  {
    std::lock_guard lk(e->publish);
    base = e->state;
    base_log = e->log;
  }
  auto pending = decide(*base);
  if (pending.empty()) return {};

  auto next = std::make_shared<ProjectState>(*base);
  auto log = std::make_shared<std::vector<ProjectEvent>>(*base_log);
  std::vector<ProjectEvent> stored;
  const auto ts = utc_now();
  for (auto& p : pending) {
    ProjectEvent ev{next->last_sequence + 1, ts, p.actor, p.action, std::move(p.subject),
                    std::move(p.payload)};
    try {
      apply(*next, ev);
    } catch (const Error& err) {
      throw Error(ErrorCode::Internal, std::string("rejected event: ") + err.what());
    }
    log->push_back(ev);
    stored.push_back(std::move(ev));
  }
  write_file_atomic(path_of(id), serialize_project({id, e->created, *log}, *next));
  {
    std::lock_guard lk(e->publish);
    e->state = std::move(next);
    e->log = std::move(log);
    e->warnings.clear();
  }
  return stored;
}

}  // namespace pedforge::store

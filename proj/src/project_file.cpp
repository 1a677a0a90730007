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

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "pedforge/error.hpp"
#include "pedforge/store.hpp"

namespace pedforge::store {

namespace {

[[noreturn]] void storage_failure(const std::string& what, const std::string& path) {
  throw Error(ErrorCode::StorageFailure, what + " '" + path + "': " + std::strerror(errno),
              {{"path", path}});
}

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorCode::CorruptFile, "project file is corrupt: " + why, {{"reason", why}});
}

}  // namespace

std::string serialize_project(const ProjectFile& file, const ProjectState& state) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : file.events) events.push_back(to_json(e));
  nlohmann::json j = {{"format", std::string(kFormat)},
                      {"project", file.id},
                      {"created", file.created},
                      {"event_count", file.events.size()},
                      {"events", std::move(events)},
                      {"snapshot", to_json(state)}};
  return j.dump(2) + "\n";
}

LoadedProject parse_project(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    corrupt(std::string("not valid JSON (") + ex.what() + ")");
  }
  if (!j.is_object()) corrupt("top level is not an object");
  if (j.value("format", "") != kFormat) corrupt("unsupported format, expected " + std::string(kFormat));
  if (!j.contains("project") || !j["project"].is_string()) corrupt("missing project id");
  if (!j.contains("events") || !j["events"].is_array()) corrupt("missing events section");
  if (!j.contains("event_count") || !j["event_count"].is_number_unsigned()) corrupt("missing event_count");
  if (j["event_count"].get<std::size_t>() != j["events"].size()) {
    corrupt("event_count is " + std::to_string(j["event_count"].get<std::size_t>()) + " but " +
            std::to_string(j["events"].size()) + " events are present");
  }

  LoadedProject out;
  out.file.id = j["project"].get<std::string>();
  out.file.created = j.value("created", "");
  std::int64_t expect = 1;
  for (const auto& ej : j["events"]) {
    auto e = event_from_json(ej);
    if (e.sequence != expect) corrupt("sequence gap at event " + std::to_string(expect));
    ++expect;
    out.file.events.push_back(std::move(e));
  }
  out.state = replay(out.file.id, out.file.events);
  if (!j.contains("snapshot")) {
    out.warnings.push_back("snapshot missing; state rebuilt from the event log");
  } else if (j["snapshot"] != to_json(out.state)) {
    out.warnings.push_back("snapshot does not match the event log; state rebuilt from the event log");
  }
  return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) storage_failure("cannot create", tmp);
  std::size_t off = 0;
  while (off < content.size()) {
    auto n = ::write(fd, content.data() + off, content.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      storage_failure("cannot write", tmp);
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    storage_failure("cannot sync", tmp);
  }
  ::close(fd);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) storage_failure("cannot rename into", path);
  auto dir = std::filesystem::path(path).parent_path();
  if (dir.empty()) dir = ".";
  int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
}

}  // namespace pedforge::store

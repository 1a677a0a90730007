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

#include <memory>
#include <string>

#include "pedforge/workbench.hpp"

namespace pedforge::api {

/// HTTP front end of a Workbench. All bodies are JSON except artifact
/// exports; every 4xx/5xx body is {"code", "message", "detail"}.
class ApiServer {
 public:
  explicit ApiServer(service::Workbench& workbench);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the
  /// bound port. Throws std::runtime_error when the address is unusable.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pedforge::api

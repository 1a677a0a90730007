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

// pedforge command line: the HTTP service plus a few offline checks.

#include <CLI11.hpp>

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "pedforge/api.hpp"
#include "pedforge/cnl.hpp"
#include "pedforge/error.hpp"
#include "pedforge/pseudocode.hpp"
#include "pedforge/store.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ServeOptions {
  int port = 8080;
  std::string bind = "127.0.0.1";
  std::string data_dir = "./pedforge-data";
  std::optional<std::uint64_t> mock_seed;
  std::string mock_script;
  std::string questions;
  int max_attempts = 4;
  int timeout_ms = 60'000;
};

int serve(const ServeOptions& o) {
  using namespace pedforge;
  // Handle termination on a dedicated thread so shutdown runs outside a
  // signal handler.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  std::shared_ptr<llm::Provider> provider;
  if (o.mock_seed) {
    provider = llm::mock_provider(*o.mock_seed, llm::parse_script(o.mock_script));
  } else {
    provider = llm::http_provider(llm::http_provider_config_from_env());
  }
  llm::RetryPolicy policy{o.max_attempts, std::chrono::milliseconds(o.timeout_ms)};
  auto catalog = o.questions.empty() ? extraction::Catalog::defaults()
                                     : extraction::Catalog::load(o.questions);

  store::ProjectStore store(o.data_dir);
  service::Workbench workbench(store, llm::Gateway(provider, policy), catalog);
  api::ApiServer server(workbench);
  int port = server.bind(o.bind, o.port);
  std::cout << "pedforge listening on http://" << o.bind << ":" << port << " (data "
            << o.data_dir << ", provider " << provider->name() << ")" << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
  });
  server.listen();
  // listen() also returns when the socket fails; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int parse(const std::string& sentence, const std::string& reg_name) {
  using namespace pedforge;
  auto reg = cnl::register_from_string(reg_name);
  if (!reg) throw Error(ErrorCode::Validation, "register must be 'teaching' or 'game'");
  auto result = cnl::try_parse_sentence(sentence, *reg);
  if (auto* err = std::get_if<cnl::ParseError>(&result)) {
    std::cout << err->describe() << "\n";
    return 2;
  }
  std::cout << cnl::to_json(std::get<cnl::ControlledSentence>(result)).dump(2) << "\n";
  return 0;
}

int check_pseudocode(const std::string& path) {
  auto check = pedforge::development::validate_pseudocode(read_file(path));
  if (check.pass) {
    std::cout << "pass\n";
    return 0;
  }
  for (const auto& r : check.reasons) std::cout << r << "\n";
  return 2;
}

int check_project(const std::string& path) {
  auto loaded = pedforge::store::parse_project(read_file(path));
  std::cout << "project " << loaded.file.id << ": " << loaded.file.events.size() << " events, phase "
            << pedforge::store::to_string(loaded.state.phase) << "\n";
  for (const auto& w : loaded.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pedforge: co-design workbench for educational game sentences"};
  app.require_subcommand(1);

  ServeOptions so;
  std::uint64_t seed = 0;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", so.port, "TCP port (0 picks a free one)")->capture_default_str();
  serve_cmd->add_option("--bind", so.bind, "Listen address")->capture_default_str();
  serve_cmd->add_option("--data-dir", so.data_dir, "Project directory")->capture_default_str();
  auto* mock_opt = serve_cmd->add_option("--mock-llm", seed, "Use the offline mock provider with this seed");
  serve_cmd->add_option("--mock-script", so.mock_script, "Mock reply script, e.g. bad,bad,good")
      ->needs(mock_opt);
  serve_cmd->add_option("--questions", so.questions, "Elicitation catalog file");
  serve_cmd->add_option("--max-attempts", so.max_attempts, "Provider attempts per request")
      ->check(CLI::Range(1, 20))
      ->capture_default_str();
  serve_cmd->add_option("--timeout-ms", so.timeout_ms, "Per-attempt provider timeout")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string sentence, reg = "teaching";
  auto* parse_cmd = app.add_subcommand("parse", "Parse a controlled sentence and print its slots");
  parse_cmd->add_option("sentence", sentence)->required();
  parse_cmd->add_option("--register", reg)->check(CLI::IsMember({"teaching", "game"}))->capture_default_str();

  std::string pseudo_path;
  auto* pseudo_cmd = app.add_subcommand("check-pseudocode", "Validate an exported pseudocode file");
  pseudo_cmd->add_option("file", pseudo_path)->required()->check(CLI::ExistingFile);

  std::string project_path;
  auto* project_cmd = app.add_subcommand("check-project", "Verify a project file by replaying its log");
  project_cmd->add_option("file", project_path)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) {
      if (*mock_opt) so.mock_seed = seed;
      return serve(so);
    }
    if (*parse_cmd) return parse(sentence, reg);
    if (*pseudo_cmd) return check_pseudocode(pseudo_path);
    if (*project_cmd) return check_project(project_path);
  } catch (const pedforge::Error& e) {
    std::cerr << "error: " << pedforge::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

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

#include "pedforge/api.hpp"

#include <httplib.h>

#include <functional>
#include <stdexcept>

#include "pedforge/error.hpp"
#include "pedforge/mapping.hpp"
#include "pedforge/store.hpp"

namespace pedforge::api {

namespace {

using Req = httplib::Request;
using Res = httplib::Response;
using Handler = std::function<void(const Req&, Res&)>;

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status(e.code()), e.to_json());
}

// Uniform error mapping for every route.
Handler guarded(Handler h) {
  return [h = std::move(h)](const Req& req, Res& res) {
    try {
      h(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const nlohmann::json::exception& e) {
      send_error(res, Error(ErrorCode::Validation, std::string("malformed request body: ") + e.what()));
    } catch (const std::exception& e) {
      send_error(res, Error(ErrorCode::Internal, e.what()));
    }
  };
}

nlohmann::json body_of(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  auto j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::Validation, "request body must be a JSON object");
  }
  return j;
}

std::string require_string(const nlohmann::json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw Error(ErrorCode::Validation, std::string("'") + key + "' is required and must be a string",
                {{"field", key}});
  }
  return body[key].get<std::string>();
}

// Context answers may arrive as text or as the three structured subfields.
std::string answer_text(const nlohmann::json& body) {
  if (body.contains("text")) return require_string(body, "text");
  if (body.contains("environment") || body.contains("realism") || body.contains("tone")) {
    auto part = [&](const char* k) {
      return body.contains(k) && body[k].is_string() ? body[k].get<std::string>() : std::string();
    };
    return "environment: " + part("environment") + "; realism: " + part("realism") +
           "; tone: " + part("tone");
  }
  return require_string(body, "text");
}

}  // namespace

struct ApiServer::Impl {
  service::Workbench& wb;
  httplib::Server server;

  explicit Impl(service::Workbench& w) : wb(w) { routes(); }

  void route_get(const std::string& pattern, Handler h) { server.Get(pattern, guarded(std::move(h))); }
  void route_post(const std::string& pattern, Handler h) { server.Post(pattern, guarded(std::move(h))); }
  void route_patch(const std::string& pattern, Handler h) { server.Patch(pattern, guarded(std::move(h))); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/.*)", [](const Req&, Res& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.set_error_handler([](const Req& req, Res& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_json(res, 404,
                  Error(ErrorCode::NotFound, "no route for " + req.method + " " + req.path).to_json());
      } else if (res.status >= 400) {
        int status = res.status;
        send_json(res, status,
                  Error(status >= 500 ? ErrorCode::Internal : ErrorCode::Validation,
                        "request rejected (HTTP " + std::to_string(status) + ")")
                      .to_json());
      }
    });

    const std::string P = R"(/projects/([^/]+))";
    const std::string seg = R"(([^/]+))";

    route_get("/health", [](const Req&, Res& res) {
      send_json(res, 200, {{"status", "ok"}, {"format", std::string(store::kFormat)}});
    });
    route_get("/mapping-table", [](const Req&, Res& res) {
      send_json(res, 200, mapping::mapping_table_json());
    });
    route_post("/projects", [this](const Req&, Res& res) {
      auto id = wb.create_project();
      send_json(res, 201, wb.project(id));
    });
    route_get(P, [this](const Req& req, Res& res) {
      send_json(res, 200, wb.project(req.matches[1]));
    });
    route_get(P + "/question", [this](const Req& req, Res& res) {
      send_json(res, 200, wb.question(req.matches[1]));
    });
    route_post(P + "/answers", [this](const Req& req, Res& res) {
      auto body = body_of(req);
      send_json(res, 200, wb.answer(req.matches[1], require_string(body, "field"), answer_text(body)));
    });
    route_get(P + "/options/" + seg, [this](const Req& req, Res& res) {
      send_json(res, 200, wb.options(req.matches[1], req.matches[2]));
    });
    route_post(P + "/pedagogy-sentence", [this](const Req& req, Res& res) {
      send_json(res, 200, wb.compose_pedagogy(req.matches[1]));
    });
    route_patch(P + "/pedagogy-sentence/slots/" + seg, [this](const Req& req, Res& res) {
      auto body = body_of(req);
      send_json(res, 200,
                wb.edit_pedagogy_slot(req.matches[1], req.matches[2], require_string(body, "text")));
    });
    route_post(P + "/candidates", [this](const Req& req, Res& res) {
      auto body = body_of(req);
      if (body.contains("sentence")) {
        send_json(res, 201, wb.author_candidate(req.matches[1], body));
        return;
      }
      int n = 3;
      if (body.contains("n")) {
        if (!body["n"].is_number_integer()) throw Error(ErrorCode::Validation, "'n' must be an integer");
        n = body["n"].get<int>();
      }
      send_json(res, 201, wb.generate_candidates(req.matches[1], n));
    });
    route_post(P + "/candidates/" + seg + "/slots/" + seg + "/regenerate", [this](const Req& req, Res& res) {
      send_json(res, 200, wb.regenerate_slot(req.matches[1], req.matches[2], req.matches[3]));
    });
    route_patch(P + "/candidates/" + seg + "/slots/" + seg, [this](const Req& req, Res& res) {
      auto body = body_of(req);
      std::optional<std::string> rationale;
      if (body.contains("rationale") && !body["rationale"].is_null()) {
        rationale = require_string(body, "rationale");
      }
      send_json(res, 200,
                wb.edit_candidate_slot(req.matches[1], req.matches[2], req.matches[3],
                                       require_string(body, "text"), rationale));
    });
    route_post(P + "/candidates/" + seg + "/accept", [this](const Req& req, Res& res) {
      send_json(res, 200, wb.accept(req.matches[1], req.matches[2]));
    });
    route_post(P + "/refine", [this](const Req& req, Res& res) {
      auto body = body_of(req);
      send_json(res, 200, wb.refine(req.matches[1], require_string(body, "instruction")));
    });
    route_post(P + "/artifacts/" + seg + "/zoom", [this](const Req& req, Res& res) {
      send_json(res, 201, wb.zoom(req.matches[1], req.matches[2]));
    });
    route_get(P + "/artifacts/" + seg + "/export", [this](const Req& req, Res& res) {
      res.status = 200;
      res.set_content(wb.export_artifact(req.matches[1], req.matches[2]), "text/plain; charset=utf-8");
    });
    route_get(P + R"(/trace/(.+))", [this](const Req& req, Res& res) {
      send_json(res, 200, wb.trace(req.matches[1], req.matches[2]));
    });
    route_get(P + "/events", [this](const Req& req, Res& res) {
      std::int64_t since = 0;
      if (req.has_param("since")) {
        try {
          since = std::stoll(req.get_param_value("since"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::Validation, "'since' must be an integer");
        }
      }
      send_json(res, 200, wb.events(req.matches[1], since));
    });
    route_post(P + "/phase", [this](const Req& req, Res& res) {
      auto body = body_of(req);
      send_json(res, 200, wb.advance_phase(req.matches[1], require_string(body, "target")));
    });
  }
};

ApiServer::ApiServer(service::Workbench& workbench) : impl_(std::make_unique<Impl>(workbench)) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace pedforge::api

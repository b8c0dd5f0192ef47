#pragma once

// HTTP labeling environment for on-policy preference training.
//   POST /v1/label      {case_id, inquiry} -> {verdict, resolved_answer, score}
//   GET  /v1/cases      ?split=training|benchmark -> [case_id]
//   GET  /v1/case/{id}  -> rendered prompt and metadata
//   GET  /healthz       -> ok

#include <httplib.h>

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "confuse/dpo/forge.hpp"

namespace confuse::dpo {

struct Environment {
  llm::Gateway* gateway = nullptr;
  LabelConfig label;
  const retrieval::Corpus* corpus = nullptr;
  std::vector<Case> cases;
};

class EnvironmentService {
 public:
  // Binds immediately; port 0 picks a free port. Serving starts on a
  // background thread and stops on stop() or destruction.
  EnvironmentService(Environment env, const std::string& host = "127.0.0.1", int port = 0)
      : env_(std::move(env)) {
    if (env_.gateway == nullptr) throw ParameterError("environment service needs a gateway");
    for (std::size_t i = 0; i < env_.cases.size(); ++i) {
      if (!index_.emplace(env_.cases[i].id, i).second) throw DuplicateIdError(env_.cases[i].id);
    }
    routes();
    port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  EnvironmentService(const EnvironmentService&) = delete;
  EnvironmentService& operator=(const EnvironmentService&) = delete;

  ~EnvironmentService() { stop(); }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }
  std::size_t label_calls() const { return label_calls_; }

  // Blocks the caller until the server stops.
  void wait() {
    if (thread_.joinable()) thread_.join();
  }

 private:
  static void reply(httplib::Response& res, int status, const ojson& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void error(httplib::Response& res, int status, const std::string& what) {
    reply(res, status, ojson{{"error", what}});
  }

  const Case* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &env_.cases[it->second];
  }

  void routes() {
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });

    server_.Get("/v1/cases", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<Split> split;
      if (req.has_param("split")) {
        try {
          split = split_from_string(req.get_param_value("split"));
        } catch (const ParameterError& e) {
          return error(res, 400, e.what());
        }
      }
      ojson ids = ojson::array();
      for (const auto& c : env_.cases) {
        if (!split || c.split == *split) ids.push_back(c.id);
      }
      reply(res, 200, ids);
    });

    server_.Get(R"(/v1/case/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      const Case* c = find(req.matches[1]);
      if (!c) return error(res, 404, "unknown case_id '" + std::string(req.matches[1]) + "'");
      reply(res, 200,
            ojson{{"case_id", c->id},
                  {"dataset", std::string(to_string(c->dataset))},
                  {"split", std::string(to_string(c->split))},
                  {"label", c->label ? ojson(std::string(to_string(*c->label))) : ojson(nullptr)},
                  {"prompt", pair_prompt(*c)}});
    });

    server_.Post("/v1/label", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = ojson::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) return error(res, 400, "body must be a JSON object");
      auto id = body.find("case_id");
      auto inquiry = body.find("inquiry");
      if (id == body.end() || !id->is_string() || inquiry == body.end() || !inquiry->is_string()) {
        return error(res, 400, "body needs string fields case_id and inquiry");
      }
      const Case* c = find(id->get<std::string>());
      if (!c) return error(res, 404, "unknown case_id '" + id->get<std::string>() + "'");
      ++label_calls_;
      try {
        auto out = label_candidate(*env_.gateway, *c, inquiry->get<std::string>(), env_.label, env_.corpus);
        reply(res, 200,
              ojson{{"verdict", std::string(to_string(out.verdict))},
                    {"resolved_answer", out.resolved_answer},
                    {"score", out.score}});
      } catch (const ParameterError& e) {
        error(res, 400, e.what());
      } catch (const UnsupportedCaseError& e) {
        error(res, 422, e.what());
      } catch (const Error& e) {
        error(res, 502, e.what());
      }
    });
  }

  Environment env_;
  std::map<std::string, std::size_t> index_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
  std::atomic<std::size_t> label_calls_{0};
};

}  // namespace confuse::dpo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "sgg/agent.hpp"

namespace sgg::agent {

/// OpenAI-compatible chat-completions backend declaring one tool,
/// run_cypher(query). Configure via SGG_API_BASE / SGG_API_KEY / SGG_MODEL or
/// the explicit constructor.
class HttpBackend : public Backend {
 public:
  struct Config {
    std::string base_url;
    std::string api_key;
    std::string model;
    double temperature = 0.0;
    int max_concurrent = 4;

    static Config from_environment() {
      Config config;
      if (const char* v = std::getenv("SGG_API_BASE")) config.base_url = v;
      if (const char* v = std::getenv("SGG_API_KEY")) config.api_key = v;
      if (const char* v = std::getenv("SGG_MODEL")) config.model = v;
      if (config.base_url.empty())
        throw ConfigurationError("SGG_API_BASE is not set");
      if (config.model.empty()) throw ConfigurationError("SGG_MODEL is not set");
      return config;
    }
  };

  explicit HttpBackend(Config config)
      : config_(std::move(config)), limiter_(config_.max_concurrent) {}

  BackendAction step(const std::vector<Message>& messages) override {
    nlohmann::json body = {
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"messages", to_wire(messages)},
        {"tools",
         nlohmann::json::array(
             {{{"type", "function"},
               {"function",
                {{"name", "run_cypher"},
                 {"description", "Run a Cypher query against the scene graph database."},
                 {"parameters",
                  {{"type", "object"},
                   {"properties",
                    {{"query", {{"type", "string"}, {"description", "The Cypher query."}}}}},
                   {"required", nlohmann::json::array({"query"})}}}}}}})},
    };

    Semaphore::Guard guard(limiter_);
    httplib::Client client(config_.base_url);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto response = client.Post("/v1/chat/completions", headers, body.dump(),
                                "application/json");
    if (!response)
      throw TransportError("chat-completions request failed: " +
                           httplib::to_string(response.error()));
    if (response->status >= 500 || response->status == 429)
      throw TransportError("chat-completions returned status " +
                           std::to_string(response->status));
    if (response->status != 200)
      throw ProtocolError("chat-completions returned status " +
                          std::to_string(response->status) + ": " + response->body);
    return parse_response(response->body);
  }

 private:
  // Counting semaphore capping in-flight requests.
  class Semaphore {
   public:
    explicit Semaphore(int count) : count_(count) {}
    struct Guard {
      explicit Guard(Semaphore& s) : s_(s) { s_.acquire(); }
      ~Guard() { s_.release(); }
      Semaphore& s_;
    };

   private:
    void acquire() {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [&] { return count_ > 0; });
      --count_;
    }
    void release() {
      std::lock_guard lock(mutex_);
      ++count_;
      cv_.notify_one();
    }
    std::mutex mutex_;
    std::condition_variable cv_;
    int count_;
  };

  static nlohmann::json to_wire(const std::vector<Message>& messages) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& m : messages) {
      if (m.role == Role::Assistant && m.tool_call) {
        out.push_back(
            {{"role", "assistant"},
             {"content", nullptr},
             {"tool_calls",
              nlohmann::json::array(
                  {{{"id", "call_" + std::to_string(out.size())},
                    {"type", "function"},
                    {"function",
                     {{"name", "run_cypher"},
                      {"arguments", nlohmann::json{{"query", *m.tool_call}}.dump()}}}}})}});
      } else if (m.role == Role::Tool) {
        // The matching assistant tool_call immediately precedes this message.
        out.push_back({{"role", "tool"},
                       {"tool_call_id", "call_" + std::to_string(out.size() - 1)},
                       {"content", m.text}});
      } else {
        out.push_back({{"role", role_name(m.role)}, {"content", m.text}});
      }
    }
    return out;
  }

  static BackendAction parse_response(const std::string& body) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("malformed chat-completions response: ") + e.what());
    }
    try {
      const auto& message = doc.at("choices").at(0).at("message");
      BackendAction action;
      if (message.contains("tool_calls") && !message["tool_calls"].empty()) {
        const auto& args_text =
            message["tool_calls"][0].at("function").at("arguments").get<std::string>();
        action = BackendAction::tool_call(
            nlohmann::json::parse(args_text).at("query").get<std::string>());
      } else {
        const std::string content = message.value("content", "");
        action = action_from_text(content);
      }
      if (doc.contains("usage") && doc["usage"].contains("completion_tokens"))
        action.completion_tokens = doc["usage"]["completion_tokens"].get<std::int64_t>();
      return action;
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("unexpected chat-completions shape: ") + e.what());
    }
  }

  Config config_;
  Semaphore limiter_;
};

}  // namespace sgg::agent

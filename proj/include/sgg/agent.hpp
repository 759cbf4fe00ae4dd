// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgg/baseline.hpp"
#include "sgg/prompts.hpp"
#include "sgg/query/eval.hpp"
#include "sgg/query/parser.hpp"
#include "sgg/scene_graph.hpp"

namespace sgg::agent {

enum class Role { System, User, Assistant, Tool };

inline const char* role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    case Role::Tool: return "tool";
  }
  return "system";
}

/// Heuristic token count: ceil(bytes / 4). The HTTP backend's reported usage
/// overrides this for assistant messages.
inline std::int64_t count_tokens(const std::string& text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

struct Message {
  Role role = Role::System;
  std::string text;
  std::optional<std::string> tool_call;  // Cypher query, assistant messages only
  std::int64_t tokens = 0;

  static Message make(Role role, std::string text) {
    Message m;
    m.role = role;
    m.tokens = count_tokens(text);
    m.text = std::move(text);
    return m;
  }
};

struct BackendAction {
  enum class Kind { ToolCall, FinalText };
  Kind kind = Kind::FinalText;
  std::string text;   // query text for ToolCall, response text for FinalText
  std::optional<std::int64_t> completion_tokens;  // authoritative when present

  static BackendAction tool_call(std::string query) {
    return {Kind::ToolCall, std::move(query), std::nullopt};
  }
  static BackendAction final_text(std::string text) {
    return {Kind::FinalText, std::move(text), std::nullopt};
  }
};

/// Transient failure (network and friends); retried with backoff.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-retriable failure (malformed response, exhausted script).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendAction step(const std::vector<Message>& messages) = 0;
};

/// Text fallback: a fenced ```cypher block is a tool call, anything else is a
/// final answer.
inline BackendAction action_from_text(const std::string& text) {
  const std::string fence = "```cypher";
  auto start = text.find(fence);
  if (start == std::string::npos) return BackendAction::final_text(text);
  start += fence.size();
  auto end = text.find("```", start);
  if (end == std::string::npos) end = text.size();
  std::string query = text.substr(start, end - start);
  const char* ws = " \t\r\n";
  const auto first = query.find_first_not_of(ws);
  const auto last = query.find_last_not_of(ws);
  if (first == std::string::npos) return BackendAction::final_text(text);
  return BackendAction::tool_call(query.substr(first, last - first + 1));
}

/// Replays a fixed list of assistant actions; deterministic.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::vector<BackendAction> actions)
      : actions_(std::move(actions)) {}

  /// Accepts a JSON array whose entries are {"tool_call": q}, {"text": t}, or
  /// a plain string routed through the text fallback.
  static ScriptedBackend from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw ProtocolError("scripted backend expects a JSON array");
    std::vector<BackendAction> actions;
    for (const auto& entry : doc) {
      if (entry.is_string()) {
        actions.push_back(action_from_text(entry.get<std::string>()));
      } else if (entry.is_object() && entry.contains("tool_call")) {
        actions.push_back(BackendAction::tool_call(entry.at("tool_call").get<std::string>()));
      } else if (entry.is_object() && entry.contains("text")) {
        actions.push_back(BackendAction::final_text(entry.at("text").get<std::string>()));
      } else {
        throw ProtocolError("scripted backend entry must be a string, {\"tool_call\"}, or "
                            "{\"text\"}");
      }
    }
    return ScriptedBackend(std::move(actions));
  }

  BackendAction step(const std::vector<Message>&) override {
    if (next_ >= actions_.size()) throw ProtocolError("scripted backend exhausted");
    return actions_[next_++];
  }

 private:
  std::vector<BackendAction> actions_;
  std::size_t next_ = 0;
};

enum class Task { Qa, Pddl };
enum class AnswerKind { Number, String, List, Set, Dict, Point };

inline const char* answer_kind_name(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::Number: return "number";
    case AnswerKind::String: return "string";
    case AnswerKind::List: return "list";
    case AnswerKind::Set: return "set";
    case AnswerKind::Dict: return "dict";
    case AnswerKind::Point: return "point";
  }
  return "string";
}

inline std::optional<AnswerKind> answer_kind_from_name(const std::string& name) {
  if (name == "number") return AnswerKind::Number;
  if (name == "string") return AnswerKind::String;
  if (name == "list") return AnswerKind::List;
  if (name == "set") return AnswerKind::Set;
  if (name == "dict") return AnswerKind::Dict;
  if (name == "point") return AnswerKind::Point;
  return std::nullopt;
}

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PromptSpec {
  Task task = Task::Qa;
  std::string labelspace_text;          // from prompts::labelspace_description
  std::string ontology_text = prompts::kSceneGraphDescription;
  std::string interface_text = prompts::kDatabaseSchema;
  std::optional<std::string> pddl_domain_text;  // required for pddl
  std::vector<std::pair<std::string, std::string>> examples;
  std::string user_input;
  AnswerKind answer_kind = AnswerKind::String;  // qa only

  static PromptSpec for_task(Task task, const PropertyGraph& graph, std::string user_input) {
    PromptSpec spec;
    spec.task = task;
    spec.labelspace_text = prompts::labelspace_description(graph.labelspace());
    spec.user_input = std::move(user_input);
    if (task == Task::Pddl) {
      spec.pddl_domain_text = prompts::kPddlDomain;
      spec.examples = prompts::pddl_examples();
    } else {
      spec.examples = prompts::qa_examples();
    }
    return spec;
  }
};

/// Assembles the prompt skeleton: system, ontology, labelspace, interface,
/// (pddl domain,) in-context pairs, transition, user input, format footer.
inline std::vector<Message> build_prompt(const PromptSpec& spec) {
  if (spec.task == Task::Pddl && !spec.pddl_domain_text)
    throw ConfigurationError("pddl task requires the PDDL domain text");
  if (spec.labelspace_text.empty())
    throw ConfigurationError("labelspace description is required");
  if (spec.user_input.empty()) throw ConfigurationError("user input is required");

  std::vector<Message> out;
  out.push_back(Message::make(
      Role::System, spec.task == Task::Pddl ? prompts::kSystemPddl : prompts::kSystemQa));
  out.push_back(Message::make(Role::System, spec.ontology_text));
  out.push_back(Message::make(Role::System, spec.labelspace_text));
  out.push_back(Message::make(Role::System, spec.interface_text));
  if (spec.task == Task::Pddl)
    out.push_back(Message::make(Role::System, *spec.pddl_domain_text));
  out.push_back(Message::make(Role::System, spec.task == Task::Pddl
                                                ? prompts::kPddlExamplesHeader
                                                : prompts::kQaExamplesHeader));
  for (const auto& [user, assistant] : spec.examples) {
    out.push_back(Message::make(Role::User, user));
    out.push_back(Message::make(Role::Assistant, assistant));
  }
  out.push_back(Message::make(Role::System, spec.task == Task::Pddl
                                                ? prompts::kPddlTransition
                                                : prompts::kQaTransition));
  out.push_back(Message::make(Role::User, spec.user_input));
  if (spec.task == Task::Pddl) {
    out.push_back(Message::make(Role::System, prompts::kPddlFooter));
  } else {
    out.push_back(Message::make(
        Role::System,
        std::string(prompts::kQaFooterPrefix) + answer_kind_name(spec.answer_kind)));
  }
  return out;
}

struct Extraction {
  enum class Status { Found, Absent, Multiple };
  Status status = Status::Absent;
  std::string text;
};

/// Pulls the final answer out of <answer>...</answer> tags. Exactly one pair
/// must appear.
inline Extraction extract_answer(const std::string& text) {
  const std::string open = "<answer>", close = "</answer>";
  auto start = text.find(open);
  if (start == std::string::npos) return {Extraction::Status::Absent, ""};
  auto end = text.find(close, start + open.size());
  if (end == std::string::npos) return {Extraction::Status::Absent, ""};
  if (text.find(open, start + open.size()) != std::string::npos ||
      text.find(close, end + close.size()) != std::string::npos)
    return {Extraction::Status::Multiple, ""};
  std::string inner = text.substr(start + open.size(), end - start - open.size());
  const char* ws = " \t\r\n";
  const auto first = inner.find_first_not_of(ws);
  if (first == std::string::npos) return {Extraction::Status::Found, ""};
  const auto last = inner.find_last_not_of(ws);
  return {Extraction::Status::Found, inner.substr(first, last - first + 1)};
}

inline constexpr const char* kForcingMessage =
    "You have used all tool calls. Provide your final answer now.";

enum class SessionStatus { Success, ExtractionFailure, SessionFailure };

struct SessionTranscript {
  std::vector<Message> messages;
  std::int64_t input_tokens = 0;   // I: non-assistant, non-tool messages
  std::int64_t tool_tokens = 0;    // T: tool-result messages
  std::int64_t output_tokens = 0;  // O: assistant messages
  int tool_calls = 0;
  std::string outcome;  // answer text or failure reason
};

struct SessionResult {
  SessionStatus status = SessionStatus::SessionFailure;
  std::optional<std::string> answer;
  SessionTranscript transcript;
};

struct SessionOptions {
  int max_calls = 5;
  std::size_t tool_result_rows = 50;
  int retries = 3;
  std::chrono::milliseconds initial_backoff{250};
};

namespace detail {

inline BackendAction step_with_retry(Backend& backend, const std::vector<Message>& messages,
                                     const SessionOptions& options) {
  auto backoff = options.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return backend.step(messages);
    } catch (const TransportError&) {
      if (attempt >= options.retries) throw;
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
}

inline std::string run_tool_call(PropertyGraph& graph, const std::string& query_text,
                                 std::size_t max_rows) {
  auto parsed = sgg::query::parse_query(query_text);
  if (!parsed.ok()) return "QueryError: " + parsed.error().to_string();
  auto result = sgg::query::execute(graph, parsed.value());
  if (!result.ok()) return "QueryError: " + result.error().to_string();
  return sgg::query::render_result(result.value(), max_rows);
}

inline void finish_tokens(SessionTranscript& transcript) {
  transcript.input_tokens = transcript.tool_tokens = transcript.output_tokens = 0;
  for (const auto& m : transcript.messages) {
    if (m.role == Role::Assistant) transcript.output_tokens += m.tokens;
    else if (m.role == Role::Tool) transcript.tool_tokens += m.tokens;
    else transcript.input_tokens += m.tokens;
  }
}

inline Message assistant_message(const BackendAction& action) {
  Message m = Message::make(Role::Assistant, action.kind == BackendAction::Kind::ToolCall
                                                 ? action.text
                                                 : action.text);
  if (action.kind == BackendAction::Kind::ToolCall) m.tool_call = action.text;
  if (action.completion_tokens) m.tokens = *action.completion_tokens;
  return m;
}

inline SessionResult finalize(SessionTranscript transcript, const std::string& final_text) {
  detail::finish_tokens(transcript);
  Extraction extraction = extract_answer(final_text);
  SessionResult result;
  if (extraction.status == Extraction::Status::Found) {
    transcript.outcome = extraction.text;
    result = {SessionStatus::Success, extraction.text, std::move(transcript)};
  } else {
    transcript.outcome = extraction.status == Extraction::Status::Multiple
                             ? "extraction failure: multiple answer tag pairs"
                             : "extraction failure: no answer tags";
    result = {SessionStatus::ExtractionFailure, std::nullopt, std::move(transcript)};
  }
  return result;
}

inline SessionResult fail(SessionTranscript transcript, const std::string& reason) {
  detail::finish_tokens(transcript);
  transcript.outcome = reason;
  return {SessionStatus::SessionFailure, std::nullopt, std::move(transcript)};
}

}  // namespace detail

/// The agentic loop: the model may issue up to max_calls tool calls before it
/// must answer.
inline SessionResult run_session(Backend& backend, PropertyGraph& graph,
                                 const PromptSpec& spec, const SessionOptions& options = {}) {
  SessionTranscript transcript;
  transcript.messages = build_prompt(spec);
  bool forced = false;
  while (true) {
    BackendAction action;
    try {
      action = detail::step_with_retry(backend, transcript.messages, options);
    } catch (const std::exception& e) {
      return detail::fail(std::move(transcript), std::string("session failure: ") + e.what());
    }
    transcript.messages.push_back(detail::assistant_message(action));
    if (action.kind == BackendAction::Kind::FinalText)
      return detail::finalize(std::move(transcript), action.text);
    if (forced)
      return detail::fail(std::move(transcript),
                          "session failure: tool call after the limit was reached");
    ++transcript.tool_calls;
    transcript.messages.push_back(Message::make(
        Role::Tool, detail::run_tool_call(graph, action.text, options.tool_result_rows)));
    if (transcript.tool_calls >= options.max_calls) {
      transcript.messages.push_back(Message::make(Role::User, kForcingMessage));
      forced = true;
    }
  }
}

/// Non-agentic two-phase mode: exactly one tool call, then the final answer.
inline SessionResult run_single_session(Backend& backend, PropertyGraph& graph,
                                        const PromptSpec& spec,
                                        const SessionOptions& options = {}) {
  SessionTranscript transcript;
  transcript.messages = build_prompt(spec);
  transcript.messages.push_back(Message::make(
      Role::User,
      "Generate exactly one Cypher query that retrieves the information needed to respond."));
  BackendAction action;
  try {
    action = detail::step_with_retry(backend, transcript.messages, options);
  } catch (const std::exception& e) {
    return detail::fail(std::move(transcript), std::string("session failure: ") + e.what());
  }
  transcript.messages.push_back(detail::assistant_message(action));
  if (action.kind != BackendAction::Kind::ToolCall)
    return detail::fail(std::move(transcript),
                        "session failure: single-call mode requires a tool call first");
  transcript.tool_calls = 1;
  transcript.messages.push_back(Message::make(
      Role::Tool, detail::run_tool_call(graph, action.text, options.tool_result_rows)));
  transcript.messages.push_back(
      Message::make(Role::User, "Provide your final answer now using the query result."));
  try {
    action = detail::step_with_retry(backend, transcript.messages, options);
  } catch (const std::exception& e) {
    return detail::fail(std::move(transcript), std::string("session failure: ") + e.what());
  }
  transcript.messages.push_back(detail::assistant_message(action));
  if (action.kind != BackendAction::Kind::FinalText)
    return detail::fail(std::move(transcript),
                        "session failure: second tool call in single-call mode");
  return detail::finalize(std::move(transcript), action.text);
}

/// Context-window baseline: the whole serialized graph is in the prompt and
/// no tool calls are permitted.
inline SessionResult run_context_session(Backend& backend, PropertyGraph& graph,
                                         PromptSpec spec, const SessionOptions& options = {}) {
  spec.interface_text = std::string(prompts::kContextInterfaceNotes) + "\n\n<Scene Graph>\n" +
                        baseline::serialize_graph(graph) + "\n</Scene Graph>";
  SessionTranscript transcript;
  transcript.messages = build_prompt(spec);
  BackendAction action;
  try {
    action = detail::step_with_retry(backend, transcript.messages, options);
  } catch (const std::exception& e) {
    return detail::fail(std::move(transcript), std::string("session failure: ") + e.what());
  }
  transcript.messages.push_back(detail::assistant_message(action));
  if (action.kind == BackendAction::Kind::ToolCall)
    return detail::fail(std::move(transcript),
                        "session failure: tool call in context-window mode");
  return detail::finalize(std::move(transcript), action.text);
}

inline nlohmann::json transcript_to_json(const SessionTranscript& t) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : t.messages) {
    nlohmann::json entry = {{"role", role_name(m.role)},
                            {"text", m.text},
                            {"tokens", m.tokens}};
    if (m.tool_call) entry["tool_call"] = *m.tool_call;
    messages.push_back(std::move(entry));
  }
  return nlohmann::json{{"messages", std::move(messages)},
                        {"input_tokens", t.input_tokens},
                        {"tool_tokens", t.tool_tokens},
                        {"output_tokens", t.output_tokens},
                        {"tool_calls", t.tool_calls},
                        {"outcome", t.outcome}};
}

}  // namespace sgg::agent

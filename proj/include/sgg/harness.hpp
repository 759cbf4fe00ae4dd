// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgg/agent.hpp"
#include "sgg/goal.hpp"
#include "sgg/scene_graph.hpp"
#include "sgg/sldp.hpp"

namespace sgg::harness {

class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalCase {
  std::string id;
  agent::Task task = agent::Task::Qa;
  std::string graph_id;
  std::string input;
  std::string gold;
  agent::AnswerKind kind = agent::AnswerKind::String;  // qa only
};

enum class FailureClass { None, WrongAnswer, ExtractionFailure, SessionFailure, ParseFailure };

inline const char* failure_class_name(FailureClass f) {
  switch (f) {
    case FailureClass::None: return "none";
    case FailureClass::WrongAnswer: return "wrong-answer";
    case FailureClass::ExtractionFailure: return "extraction-failure";
    case FailureClass::SessionFailure: return "session-failure";
    case FailureClass::ParseFailure: return "parse-failure";
  }
  return "none";
}

struct Outcome {
  std::string case_id;
  bool success = false;
  std::string predicted;
  FailureClass failure = FailureClass::None;
  std::int64_t input_tokens = 0;
  std::int64_t tool_tokens = 0;
  std::int64_t output_tokens = 0;
  int tool_calls = 0;
};

enum class Mode { Agentic, Single, Context };

inline const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Agentic: return "agentic";
    case Mode::Single: return "single";
    case Mode::Context: return "context";
  }
  return "agentic";
}

inline std::optional<Mode> mode_from_name(const std::string& name) {
  if (name == "agentic") return Mode::Agentic;
  if (name == "single") return Mode::Single;
  if (name == "context") return Mode::Context;
  return std::nullopt;
}

/// One JSON object per line: {id, task, graph, input, gold, kind?}.
inline std::vector<EvalCase> load_dataset(const std::string& jsonl_text) {
  std::vector<EvalCase> cases;
  std::istringstream stream(jsonl_text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw HarnessError("dataset line " + std::to_string(line_number) + ": " + e.what());
    }
    EvalCase c;
    try {
      c.id = doc.at("id").get<std::string>();
      const std::string task = doc.at("task").get<std::string>();
      if (task == "qa") c.task = agent::Task::Qa;
      else if (task == "pddl") c.task = agent::Task::Pddl;
      else throw HarnessError("dataset line " + std::to_string(line_number) +
                              ": unknown task '" + task + "'");
      c.graph_id = doc.at("graph").get<std::string>();
      c.input = doc.at("input").get<std::string>();
      c.gold = doc.at("gold").get<std::string>();
      if (c.task == agent::Task::Qa) {
        const std::string kind = doc.at("kind").get<std::string>();
        auto parsed = agent::answer_kind_from_name(kind);
        if (!parsed)
          throw HarnessError("dataset line " + std::to_string(line_number) +
                             ": unknown answer kind '" + kind + "'");
        c.kind = *parsed;
      }
    } catch (const nlohmann::json::exception& e) {
      throw HarnessError("dataset line " + std::to_string(line_number) + ": " + e.what());
    }
    // The gold answer must parse under the task's checker.
    if (c.task == agent::Task::Qa) {
      try {
        sldp::parse_sldp(c.gold);
      } catch (const sldp::SldpParseError& e) {
        throw HarnessError("case " + c.id + ": gold does not parse as SLDP: " + e.what());
      }
    } else {
      try {
        goal::parse_goal(c.gold);
      } catch (const goal::GoalError& e) {
        throw HarnessError("case " + c.id + ": gold does not parse as a goal: " + e.what());
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

/// Pipeline-agnostic scoring of a predicted answer against the gold.
inline Outcome score_case(const EvalCase& c, const std::string& predicted) {
  Outcome outcome;
  outcome.case_id = c.id;
  outcome.predicted = predicted;
  if (c.task == agent::Task::Qa) {
    sldp::SldpValue gold = sldp::parse_sldp(c.gold);
    sldp::SldpValue answer;
    try {
      answer = sldp::parse_sldp(predicted);
    } catch (const sldp::SldpParseError&) {
      outcome.failure = FailureClass::ParseFailure;
      return outcome;
    }
    outcome.success = sldp::sldp_equal(gold, answer);
  } else {
    goal::GoalPtr gold = goal::parse_goal(c.gold);
    goal::GoalPtr answer;
    try {
      answer = goal::parse_goal(predicted);
    } catch (const goal::GoalError&) {
      outcome.failure = FailureClass::ParseFailure;
      return outcome;
    }
    outcome.success = goal::goals_equivalent(*gold, *answer);
  }
  if (!outcome.success) outcome.failure = FailureClass::WrongAnswer;
  return outcome;
}

struct ReportGroup {
  std::string task;
  std::string graph_id;
  std::string mode;
  std::size_t cases = 0;
  std::size_t successes = 0;
  double mean_input_tokens = 0;
  double mean_tool_tokens = 0;
  double mean_output_tokens = 0;

  double success_rate() const {
    return cases == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(cases);
  }
};

struct Report {
  std::vector<ReportGroup> groups;   // sorted by (task, graph, mode)
  std::vector<Outcome> outcomes;     // sorted by case id
};

struct RunOptions {
  Mode mode = Mode::Agentic;
  int max_calls = 5;
  int workers = 4;
};

/// Creates one backend per session so scripted positions don't interleave.
using BackendFactory = std::function<std::unique_ptr<agent::Backend>(const EvalCase&)>;

inline Report run_eval(const std::map<std::string, PropertyGraph>& graphs,
                       const std::vector<EvalCase>& cases, const BackendFactory& make_backend,
                       const RunOptions& options = {}) {
  for (const auto& c : cases)
    if (!graphs.count(c.graph_id))
      throw HarnessError("case " + c.id + " references unknown graph '" + c.graph_id + "'");

  std::vector<Outcome> outcomes(cases.size());
  std::mutex graph_mutex;  // sessions may run SET queries; serialize graph access
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      const EvalCase& c = cases[i];
      // Each session gets a private copy of the graph so SET queries cannot
      // leak across cases.
      PropertyGraph graph;
      {
        std::lock_guard lock(graph_mutex);
        graph = graphs.at(c.graph_id);
      }
      agent::PromptSpec spec = agent::PromptSpec::for_task(c.task, graph, c.input);
      spec.answer_kind = c.kind;
      agent::SessionOptions session_options;
      session_options.max_calls = options.max_calls;
      std::unique_ptr<agent::Backend> backend = make_backend(c);
      agent::SessionResult session;
      switch (options.mode) {
        case Mode::Agentic:
          session = agent::run_session(*backend, graph, spec, session_options);
          break;
        case Mode::Single:
          session = agent::run_single_session(*backend, graph, spec, session_options);
          break;
        case Mode::Context:
          session = agent::run_context_session(*backend, graph, spec, session_options);
          break;
      }
      Outcome outcome;
      switch (session.status) {
        case agent::SessionStatus::Success:
          outcome = score_case(c, *session.answer);
          break;
        case agent::SessionStatus::ExtractionFailure:
          outcome.case_id = c.id;
          outcome.failure = FailureClass::ExtractionFailure;
          break;
        case agent::SessionStatus::SessionFailure:
          outcome.case_id = c.id;
          outcome.failure = FailureClass::SessionFailure;
          break;
      }
      outcome.input_tokens = session.transcript.input_tokens;
      outcome.tool_tokens = session.transcript.tool_tokens;
      outcome.output_tokens = session.transcript.output_tokens;
      outcome.tool_calls = session.transcript.tool_calls;
      outcomes[i] = std::move(outcome);
    }
  };
  std::vector<std::thread> threads;
  const int worker_count = std::max(1, options.workers);
  for (int i = 0; i < worker_count; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  Report report;
  std::map<std::tuple<std::string, std::string, std::string>, ReportGroup> groups;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const EvalCase& c = cases[i];
    const Outcome& o = outcomes[i];
    auto key = std::make_tuple(std::string(c.task == agent::Task::Qa ? "qa" : "pddl"),
                               c.graph_id, std::string(mode_name(options.mode)));
    ReportGroup& g = groups[key];
    g.task = std::get<0>(key);
    g.graph_id = std::get<1>(key);
    g.mode = std::get<2>(key);
    ++g.cases;
    if (o.success) ++g.successes;
    g.mean_input_tokens += static_cast<double>(o.input_tokens);
    g.mean_tool_tokens += static_cast<double>(o.tool_tokens);
    g.mean_output_tokens += static_cast<double>(o.output_tokens);
  }
  for (auto& [key, g] : groups) {
    g.mean_input_tokens /= static_cast<double>(g.cases);
    g.mean_tool_tokens /= static_cast<double>(g.cases);
    g.mean_output_tokens /= static_cast<double>(g.cases);
    report.groups.push_back(g);
  }
  report.outcomes = std::move(outcomes);
  std::sort(report.outcomes.begin(), report.outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return a.case_id < b.case_id; });
  return report;
}

inline nlohmann::json report_to_json(const Report& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.groups)
    groups.push_back({{"task", g.task},
                      {"graph", g.graph_id},
                      {"mode", g.mode},
                      {"cases", g.cases},
                      {"successes", g.successes},
                      {"success_rate", g.success_rate()},
                      {"mean_input_tokens", g.mean_input_tokens},
                      {"mean_tool_tokens", g.mean_tool_tokens},
                      {"mean_output_tokens", g.mean_output_tokens}});
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : report.outcomes)
    outcomes.push_back({{"id", o.case_id},
                        {"success", o.success},
                        {"predicted", o.predicted},
                        {"failure", failure_class_name(o.failure)},
                        {"input_tokens", o.input_tokens},
                        {"tool_tokens", o.tool_tokens},
                        {"output_tokens", o.output_tokens},
                        {"tool_calls", o.tool_calls}});
  return nlohmann::json{{"groups", std::move(groups)}, {"outcomes", std::move(outcomes)}};
}

/// Aligned text table per group with I/T/O token columns.
inline std::string report_to_text(const Report& report) {
  std::vector<std::array<std::string, 7>> rows;
  rows.push_back({"task", "graph", "mode", "success", "I", "T", "O"});
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return std::string(buf);
  };
  for (const auto& g : report.groups) {
    char rate[32];
    std::snprintf(rate, sizeof(rate), "%.3f", g.success_rate());
    rows.push_back({g.task, g.graph_id, g.mode, rate, fmt(g.mean_input_tokens),
                    fmt(g.mean_tool_tokens), fmt(g.mean_output_tokens)});
  }
  std::array<std::size_t, 7> widths{};
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      out += row[i];
      out.append(widths[i] - row[i].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

}  // namespace sgg::harness

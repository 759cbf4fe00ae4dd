// SPDX-License-Identifier: Apache-2.0
//
// sgg: scene-graph grounding CLI.
//   ingest     load + optionally validate a graph
//   query      run Cypher against a graph (REPL without -e)
//   ask        run one agent session
//   eval       run a JSONL dataset through a pipeline
//   check      compare a prediction against a gold answer
//   serialize  context-window serialization of a graph
//
// Exit codes: 0 success, 1 operational failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sgg/agent.hpp"
#include "sgg/baseline.hpp"
#include "sgg/goal.hpp"
#include "sgg/harness.hpp"
#include "sgg/http_backend.hpp"
#include "sgg/query/eval.hpp"
#include "sgg/query/parser.hpp"
#include "sgg/scene_graph.hpp"
#include "sgg/sldp.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

sgg::PropertyGraph load_graph_file(const std::string& path) {
  return sgg::load_graph(read_file(path));
}

// Shared by the REPL and `query -e`.
int run_one_query(sgg::PropertyGraph& graph, const std::string& text, std::ostream& out) {
  auto parsed = sgg::query::parse_query(text);
  if (!parsed.ok()) {
    out << parsed.error().to_string() << "\n";
    return kFailure;
  }
  auto result = sgg::query::execute(graph, parsed.value());
  if (!result.ok()) {
    out << result.error().to_string() << "\n";
    return kFailure;
  }
  out << sgg::query::render_result(result.value()) << "\n";
  return kOk;
}

struct BackendSelection {
  std::string scripted_path;
  bool http = false;

  bool valid() const { return scripted_path.empty() != !http; }
};

sgg::harness::BackendFactory make_backend_factory(const BackendSelection& selection) {
  if (!selection.scripted_path.empty()) {
    auto doc = nlohmann::json::parse(read_file(selection.scripted_path));
    if (doc.is_array()) {
      // One shared script for every case.
      return [doc](const sgg::harness::EvalCase&) {
        return std::make_unique<sgg::agent::ScriptedBackend>(
            sgg::agent::ScriptedBackend::from_json(doc));
      };
    }
    if (doc.is_object()) {
      // Map of case id -> action list.
      return [doc](const sgg::harness::EvalCase& c) {
        if (!doc.contains(c.id))
          throw sgg::harness::HarnessError("scripted backend has no entry for case " + c.id);
        return std::make_unique<sgg::agent::ScriptedBackend>(
            sgg::agent::ScriptedBackend::from_json(doc.at(c.id)));
      };
    }
    throw sgg::harness::HarnessError("scripted backend file must be a JSON array or object");
  }
  auto config = sgg::agent::HttpBackend::Config::from_environment();
  return [config](const sgg::harness::EvalCase&) {
    return std::make_unique<sgg::agent::HttpBackend>(config);
  };
}

int cmd_ingest(const std::string& graph_path, bool validate) {
  sgg::PropertyGraph graph = load_graph_file(graph_path);
  std::size_t objects = 0, mesh_places = 0, places = 0, rooms = 0;
  for (const auto& [sym, node] : graph.nodes()) {
    switch (node.layer) {
      case sgg::Layer::Object: ++objects; break;
      case sgg::Layer::MeshPlace: ++mesh_places; break;
      case sgg::Layer::Place: ++places; break;
      case sgg::Layer::Room: ++rooms; break;
    }
  }
  std::cout << "loaded " << graph.nodes().size() << " nodes (" << objects << " objects, "
            << mesh_places << " mesh places, " << places << " places, " << rooms
            << " rooms), " << graph.edges().size() << " edges\n";
  if (validate) {
    auto report = sgg::validate(graph);
    for (const auto& v : report.violations)
      std::cout << v.rule << ": " << v.message << "\n";
    std::cout << (report.pass() ? "validation passed" : "validation failed") << "\n";
    if (!report.pass()) return kFailure;
  }
  return kOk;
}

int cmd_query(const std::string& graph_path, const std::string& query_text) {
  sgg::PropertyGraph graph = load_graph_file(graph_path);
  if (!query_text.empty()) return run_one_query(graph, query_text, std::cout);
  std::string line;
  std::cout << "sgg> " << std::flush;
  while (std::getline(std::cin, line)) {
    if (line == "exit" || line == "quit") break;
    if (line.find_first_not_of(" \t") != std::string::npos)
      run_one_query(graph, line, std::cout);
    std::cout << "sgg> " << std::flush;
  }
  return kOk;
}

int cmd_ask(const std::string& graph_path, const std::string& task_name,
            const std::string& input, const BackendSelection& backend_selection,
            const std::string& mode_name, int max_calls,
            const std::string& transcript_path) {
  sgg::PropertyGraph graph = load_graph_file(graph_path);
  const sgg::agent::Task task =
      task_name == "pddl" ? sgg::agent::Task::Pddl : sgg::agent::Task::Qa;
  auto mode = sgg::harness::mode_from_name(mode_name);
  if (!mode) throw std::runtime_error("unknown mode: " + mode_name);

  sgg::agent::PromptSpec spec = sgg::agent::PromptSpec::for_task(task, graph, input);
  sgg::agent::SessionOptions options;
  options.max_calls = max_calls;

  sgg::harness::EvalCase pseudo;
  pseudo.id = "ask";
  auto backend = make_backend_factory(backend_selection)(pseudo);

  sgg::agent::SessionResult result;
  switch (*mode) {
    case sgg::harness::Mode::Agentic:
      result = sgg::agent::run_session(*backend, graph, spec, options);
      break;
    case sgg::harness::Mode::Single:
      result = sgg::agent::run_single_session(*backend, graph, spec, options);
      break;
    case sgg::harness::Mode::Context:
      result = sgg::agent::run_context_session(*backend, graph, spec, options);
      break;
  }
  if (!transcript_path.empty()) {
    std::ofstream out(transcript_path);
    out << sgg::agent::transcript_to_json(result.transcript).dump(2) << "\n";
  }
  if (result.status != sgg::agent::SessionStatus::Success) {
    std::cout << result.transcript.outcome << "\n";
    return kFailure;
  }
  std::cout << *result.answer << "\n";
  return kOk;
}

int cmd_eval(const std::vector<std::string>& graph_paths, const std::string& dataset_path,
             const BackendSelection& backend_selection, const std::string& mode_name,
             int max_calls, const std::string& report_path) {
  auto mode = sgg::harness::mode_from_name(mode_name);
  if (!mode) throw std::runtime_error("unknown mode: " + mode_name);
  std::map<std::string, sgg::PropertyGraph> graphs;
  for (const auto& path : graph_paths) {
    // Graph id = file stem.
    auto slash = path.find_last_of('/');
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    if (auto dot = stem.rfind(".json"); dot != std::string::npos) stem = stem.substr(0, dot);
    graphs.emplace(stem, load_graph_file(path));
  }
  auto cases = sgg::harness::load_dataset(read_file(dataset_path));
  sgg::harness::RunOptions options;
  options.mode = *mode;
  options.max_calls = max_calls;
  auto report = sgg::harness::run_eval(graphs, cases,
                                       make_backend_factory(backend_selection), options);
  std::cout << sgg::harness::report_to_text(report);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << sgg::harness::report_to_json(report).dump(2) << "\n";
  }
  return kOk;
}

int cmd_check(const std::string& task_name, const std::string& gold,
              const std::string& pred) {
  bool equivalent = false;
  if (task_name == "qa") {
    sgg::sldp::SldpValue g = sgg::sldp::parse_sldp(gold);
    sgg::sldp::SldpValue p = sgg::sldp::parse_sldp(pred);
    equivalent = sgg::sldp::sldp_equal(g, p);
  } else {
    auto g = sgg::goal::parse_goal(gold);
    auto p = sgg::goal::parse_goal(pred);
    equivalent = sgg::goal::goals_equivalent(*g, *p);
  }
  std::cout << (equivalent ? "equivalent" : "not equivalent") << "\n";
  return equivalent ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-graph grounding engine"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_graph;
  bool ingest_validate = false;
  auto* ingest = app.add_subcommand("ingest", "Load a scene graph from JSON");
  ingest->add_option("graph", ingest_graph, "Graph JSON path")->required();
  ingest->add_flag("--validate", ingest_validate, "Run ontology validation");

  // query
  std::string query_graph, query_text;
  auto* query = app.add_subcommand("query", "Run Cypher queries (REPL without -e)");
  query->add_option("graph", query_graph, "Graph JSON path")->required();
  query->add_option("-e,--execute", query_text, "Query to run non-interactively");

  // ask
  std::string ask_graph, ask_task = "qa", ask_input, ask_mode = "agentic";
  std::string ask_transcript;
  BackendSelection ask_backend;
  int ask_max_calls = 5;
  auto* ask = app.add_subcommand("ask", "Run one agent session");
  ask->add_option("graph", ask_graph, "Graph JSON path")->required();
  ask->add_option("--task", ask_task, "qa or pddl")
      ->check(CLI::IsMember({"qa", "pddl"}))
      ->required();
  ask->add_option("--input", ask_input, "User question or instruction")->required();
  ask->add_option("--backend", ask_backend.scripted_path,
                  "scripted:<path> for a scripted backend");
  ask->add_flag("--http", ask_backend.http, "Use the HTTP backend (SGG_API_* env vars)");
  ask->add_option("--mode", ask_mode, "agentic, single, or context")
      ->check(CLI::IsMember({"agentic", "single", "context"}));
  ask->add_option("--max-calls", ask_max_calls, "Tool-call budget");
  ask->add_option("--transcript", ask_transcript, "Write the transcript JSON here");

  // eval
  std::vector<std::string> eval_graphs;
  std::string eval_dataset, eval_mode = "agentic", eval_report;
  BackendSelection eval_backend;
  int eval_max_calls = 5;
  auto* eval = app.add_subcommand("eval", "Run a JSONL dataset");
  eval->add_option("graphs", eval_graphs, "Graph JSON paths")->required();
  eval->add_option("--dataset", eval_dataset, "JSONL dataset path")->required();
  eval->add_option("--backend", eval_backend.scripted_path,
                   "scripted:<path> for a scripted backend");
  eval->add_flag("--http", eval_backend.http, "Use the HTTP backend");
  eval->add_option("--mode", eval_mode, "agentic, single, or context")
      ->check(CLI::IsMember({"agentic", "single", "context"}));
  eval->add_option("--max-calls", eval_max_calls, "Tool-call budget");
  eval->add_option("--report", eval_report, "Write the report JSON here");

  // check
  std::string check_task, check_gold, check_pred;
  auto* check = app.add_subcommand("check", "Compare a prediction against a gold answer");
  check->add_option("--task", check_task, "qa or pddl")
      ->check(CLI::IsMember({"qa", "pddl"}))
      ->required();
  check->add_option("--gold", check_gold, "Gold answer text")->required();
  check->add_option("--pred", check_pred, "Predicted answer text")->required();

  // serialize
  std::string serialize_graph_path;
  auto* serialize = app.add_subcommand("serialize", "Context-window serialization");
  serialize->add_option("graph", serialize_graph_path, "Graph JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  auto strip_prefix = [](BackendSelection& selection) {
    const std::string prefix = "scripted:";
    if (selection.scripted_path.rfind(prefix, 0) == 0)
      selection.scripted_path = selection.scripted_path.substr(prefix.size());
  };
  strip_prefix(ask_backend);
  strip_prefix(eval_backend);

  try {
    if (*ingest) return cmd_ingest(ingest_graph, ingest_validate);
    if (*query) return cmd_query(query_graph, query_text);
    if (*ask) {
      if (!ask_backend.valid()) {
        std::cerr << "usage error: select exactly one backend (--backend scripted:<path> or "
                     "--http)\n";
        return kUsage;
      }
      return cmd_ask(ask_graph, ask_task, ask_input, ask_backend, ask_mode, ask_max_calls,
                     ask_transcript);
    }
    if (*eval) {
      if (!eval_backend.valid()) {
        std::cerr << "usage error: select exactly one backend (--backend scripted:<path> or "
                     "--http)\n";
        return kUsage;
      }
      return cmd_eval(eval_graphs, eval_dataset, eval_backend, eval_mode, eval_max_calls,
                      eval_report);
    }
    if (*check) return cmd_check(check_task, check_gold, check_pred);
    if (*serialize) {
      sgg::PropertyGraph graph = load_graph_file(serialize_graph_path);
      std::cout << sgg::baseline::serialize_graph(graph) << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

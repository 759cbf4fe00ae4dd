// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sgg/query/ast.hpp"
#include "sgg/query/lexer.hpp"
#include "sgg/result.hpp"
#include "sgg/scene_graph.hpp"

namespace sgg::query {

struct ExecLimits {
  int depth_cap = 32;            // variable-length expansion bound
  std::int64_t row_cap = 100000; // intermediate binding guard
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  std::size_t total_rows = 0;  // row count before LIMIT truncation
};

using ExecResult = Result<ResultTable, QueryError>;

namespace detail {

struct EvalAbort {
  QueryError error;
};

[[noreturn]] inline void abort_eval(ErrorKind kind, const std::string& message) {
  throw EvalAbort{QueryError{kind, message, 0, 0}};
}

inline bool truthy(const Value& v) {
  if (v.is_null()) return false;  // simplified null semantics: null is false
  if (v.is_bool()) return std::get<bool>(v.data);
  abort_eval(ErrorKind::TypeMismatch, "expected a boolean condition");
}

inline std::optional<Layer> layer_from_label(const std::string& label) {
  if (label == "Object") return Layer::Object;
  if (label == "MeshPlace") return Layer::MeshPlace;
  if (label == "Place") return Layer::Place;
  if (label == "Room") return Layer::Room;
  return std::nullopt;
}

class Executor {
 public:
  Executor(PropertyGraph& graph, const ExecLimits& limits)
      : graph_(graph), limits_(limits) {
    known_properties_ = {"nodeSymbol", "class", "center"};
    known_properties_.insert(graph_.known_extra_properties().begin(),
                             graph_.known_extra_properties().end());
    for (const auto& [sym, node] : graph_.nodes())
      for (const auto& [key, value] : node.extra_properties) known_properties_.insert(key);
  }

  ExecResult run(const QueryAst& ast) {
    try {
      Frame frame;
      frame.rows.push_back({});
      for (const auto& clause : ast.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&clause))
          apply_match(frame, *m);
        else
          apply_with(frame, std::get<WithClause>(clause));
      }
      if (!ast.set_items.empty()) return apply_set(frame, ast);
      return apply_return(frame, *ast.return_clause);
    } catch (const EvalAbort& abort) {
      return abort.error;
    }
  }

 private:
  struct Frame {
    std::vector<std::string> names;
    std::vector<std::vector<Value>> rows;

    std::optional<std::size_t> find(const std::string& name) const {
      for (std::size_t i = names.size(); i > 0; --i)
        if (names[i - 1] == name) return i - 1;
      return std::nullopt;
    }
  };

  // -- expressions ----------------------------------------------------------

  Value node_property(const NodeSymbol& symbol, const std::string& property) {
    const GraphNode* node = graph_.node(symbol);
    if (!node) abort_eval(ErrorKind::UnknownIdentifier, "node " + symbol.str() + " no longer exists");
    if (property == "nodeSymbol") return Value{symbol.str()};
    if (property == "class")
      return node->semantic_class ? Value{*node->semantic_class} : Value{};
    if (property == "center") return Value{node->center};
    auto it = node->extra_properties.find(property);
    if (it != node->extra_properties.end())
      return std::visit([](const auto& v) { return Value{v}; }, it->second);
    if (!known_properties_.count(property))
      abort_eval(ErrorKind::UnknownIdentifier, "unknown property '" + property + "'");
    return Value{};
  }

  Value eval(const Expr& e, const Frame& frame, const std::vector<Value>& row) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Literal>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, Variable>) {
            auto idx = frame.find(n.name);
            if (!idx)
              abort_eval(ErrorKind::UnknownIdentifier,
                         "variable '" + n.name + "' is not defined");
            return row[*idx];
          } else if constexpr (std::is_same_v<T, PropertyAccess>) {
            Value target = eval(*n.target, frame, row);
            if (target.is_null()) return Value{};
            if (!target.is_node())
              abort_eval(ErrorKind::TypeMismatch,
                         "property access '." + n.property + "' requires a node");
            return node_property(target.as_node(), n.property);
          } else if constexpr (std::is_same_v<T, FunctionCall>) {
            if (is_aggregate_function(n.name))
              abort_eval(ErrorKind::UnsupportedFeature,
                         "aggregate " + n.name + "() outside a projection");
            return eval_scalar_call(n, frame, row);
          } else if constexpr (std::is_same_v<T, Binary>) {
            return eval_binary(n, frame, row);
          } else if constexpr (std::is_same_v<T, Not>) {
            return Value{!truthy(eval(*n.child, frame, row))};
          } else if constexpr (std::is_same_v<T, Negate>) {
            Value v = eval(*n.child, frame, row);
            if (v.is_null()) return Value{};
            if (v.is_int()) return Value{-v.as_int()};
            if (v.is_float()) return Value{-v.as_double()};
            abort_eval(ErrorKind::TypeMismatch, "unary minus requires a number");
          } else {
            Value::List items;
            for (const auto& item : n.items) items.push_back(eval(*item, frame, row));
            return Value{std::move(items)};
          }
        },
        e.node);
  }

  Value eval_scalar_call(const FunctionCall& call, const Frame& frame,
                         const std::vector<Value>& row) {
    if (call.name == "tolower") {
      Value v = eval(*call.args[0], frame, row);
      if (v.is_null()) return Value{};
      if (!v.is_string()) abort_eval(ErrorKind::TypeMismatch, "toLower() requires a string");
      std::string out = v.as_string();
      std::transform(out.begin(), out.end(), out.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      return Value{std::move(out)};
    }
    if (call.name == "abs") {
      Value v = eval(*call.args[0], frame, row);
      if (v.is_null()) return Value{};
      if (v.is_int()) return Value{std::abs(v.as_int())};
      if (v.is_float()) return Value{std::abs(v.as_double())};
      abort_eval(ErrorKind::TypeMismatch, "abs() requires a number");
    }
    // point.distance
    Value a = eval(*call.args[0], frame, row);
    Value b = eval(*call.args[1], frame, row);
    if (a.is_null() || b.is_null()) return Value{};
    if (!a.is_point() || !b.is_point())
      abort_eval(ErrorKind::TypeMismatch, "point.distance() requires two points");
    return Value{a.as_point().distance(b.as_point())};
  }

  static bool values_equal(const Value& a, const Value& b) {
    // Mixed-kind comparisons are simply unequal; numbers compare numerically.
    return Value::compare(a, b) == 0 && (a.data.index() == b.data.index() ||
                                         (a.is_number() && b.is_number()));
  }

  Value eval_binary(const Binary& bin, const Frame& frame, const std::vector<Value>& row) {
    if (bin.op == BinaryOp::And) {
      if (!truthy(eval(*bin.lhs, frame, row))) return Value{false};
      return Value{truthy(eval(*bin.rhs, frame, row))};
    }
    if (bin.op == BinaryOp::Or) {
      if (truthy(eval(*bin.lhs, frame, row))) return Value{true};
      return Value{truthy(eval(*bin.rhs, frame, row))};
    }
    Value a = eval(*bin.lhs, frame, row);
    Value b = eval(*bin.rhs, frame, row);
    switch (bin.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div: return arithmetic(bin.op, a, b);
      case BinaryOp::Eq:
        if (a.is_null() || b.is_null()) return Value{false};
        return Value{values_equal(a, b)};
      case BinaryOp::Ne:
        if (a.is_null() || b.is_null()) return Value{false};
        return Value{!values_equal(a, b)};
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: {
        if (a.is_null() || b.is_null()) return Value{false};
        const bool comparable =
            (a.is_number() && b.is_number()) || (a.is_string() && b.is_string());
        if (!comparable)
          abort_eval(ErrorKind::TypeMismatch,
                     "ordering comparison requires two numbers or two strings");
        const int c = Value::compare(a, b);
        switch (bin.op) {
          case BinaryOp::Lt: return Value{c < 0};
          case BinaryOp::Le: return Value{c <= 0};
          case BinaryOp::Gt: return Value{c > 0};
          default: return Value{c >= 0};
        }
      }
      case BinaryOp::In: {
        if (b.is_null()) return Value{false};
        if (!b.is_list()) abort_eval(ErrorKind::TypeMismatch, "IN requires a list");
        if (a.is_null()) return Value{false};
        for (const auto& item : b.as_list())
          if (!item.is_null() && values_equal(a, item)) return Value{true};
        return Value{false};
      }
      case BinaryOp::StringContains: {
        if (a.is_null() || b.is_null()) return Value{false};
        if (!a.is_string() || !b.is_string())
          abort_eval(ErrorKind::TypeMismatch, "CONTAINS requires two strings");
        return Value{a.as_string().find(b.as_string()) != std::string::npos};
      }
      default: abort_eval(ErrorKind::TypeMismatch, "unexpected operator");
    }
  }

  static Value arithmetic(BinaryOp op, const Value& a, const Value& b) {
    if (a.is_null() || b.is_null()) return Value{};
    if (!a.is_number() || !b.is_number())
      abort_eval(ErrorKind::TypeMismatch, "arithmetic requires numbers");
    if (a.is_int() && b.is_int()) {
      const std::int64_t x = a.as_int(), y = b.as_int();
      switch (op) {
        case BinaryOp::Add: return Value{x + y};
        case BinaryOp::Sub: return Value{x - y};
        case BinaryOp::Mul: return Value{x * y};
        default:
          if (y == 0) abort_eval(ErrorKind::TypeMismatch, "division by zero");
          return Value{x / y};
      }
    }
    const double x = a.as_double(), y = b.as_double();
    switch (op) {
      case BinaryOp::Add: return Value{x + y};
      case BinaryOp::Sub: return Value{x - y};
      case BinaryOp::Mul: return Value{x * y};
      default:
        if (y == 0.0) abort_eval(ErrorKind::TypeMismatch, "division by zero");
        return Value{x / y};
    }
  }

  // -- pattern matching -------------------------------------------------------

  using EdgeId = std::tuple<int, NodeSymbol, NodeSymbol>;

  struct MatchState {
    const MatchClause* clause = nullptr;
    const Frame* frame = nullptr;
    const std::vector<Value>* row = nullptr;
    std::map<std::string, NodeSymbol> bound;
    std::vector<std::string> new_vars;
    std::set<EdgeId> used_edges;
    std::set<std::vector<NodeSymbol>> seen;
    std::vector<std::vector<NodeSymbol>> results;
  };

  void apply_match(Frame& frame, const MatchClause& clause) {
    // New variables, in appearance order.
    std::vector<std::string> new_vars;
    for (const auto& path : clause.patterns)
      for (const auto& node : path.nodes)
        if (node.variable && !frame.find(*node.variable) &&
            std::find(new_vars.begin(), new_vars.end(), *node.variable) == new_vars.end())
          new_vars.push_back(*node.variable);

    for (const auto& path : clause.patterns)
      for (const auto& node : path.nodes)
        if (node.label && !layer_from_label(*node.label))
          abort_eval(ErrorKind::UnknownIdentifier, "unknown label '" + *node.label + "'");

    for (const auto& path : clause.patterns)
      for (const auto& rel : path.rels)
        if (rel.variable_length) {
          const int max = rel.max_hops >= 0 ? rel.max_hops : limits_.depth_cap;
          if (max > limits_.depth_cap || rel.min_hops > limits_.depth_cap)
            abort_eval(ErrorKind::DepthExceeded,
                       "variable-length bound exceeds the depth cap of " +
                           std::to_string(limits_.depth_cap));
        }

    Frame next;
    next.names = frame.names;
    next.names.insert(next.names.end(), new_vars.begin(), new_vars.end());

    for (const auto& row : frame.rows) {
      MatchState state;
      state.clause = &clause;
      state.frame = &frame;
      state.row = &row;
      state.new_vars = new_vars;
      // Variables already bound to nodes constrain the patterns.
      for (const auto& path : clause.patterns)
        for (const auto& node : path.nodes)
          if (node.variable) {
            auto idx = frame.find(*node.variable);
            if (!idx) continue;
            const Value& v = row[*idx];
            if (!v.is_node())
              abort_eval(ErrorKind::TypeMismatch,
                         "variable '" + *node.variable + "' is not a node");
            state.bound[*node.variable] = v.as_node();
          }
      match_path(state, 0);
      for (const auto& assignment : state.results) {
        std::vector<Value> extended = row;
        for (const auto& sym : assignment) extended.push_back(Value{sym});
        next.rows.push_back(std::move(extended));
        if (static_cast<std::int64_t>(next.rows.size()) > limits_.row_cap)
          abort_eval(ErrorKind::DepthExceeded,
                     "row cap of " + std::to_string(limits_.row_cap) +
                         " exceeded during pattern expansion");
      }
    }

    frame = std::move(next);
    if (clause.where) {
      std::vector<std::vector<Value>> kept;
      for (auto& row : frame.rows)
        if (truthy(eval(**clause.where, frame, row))) kept.push_back(std::move(row));
      frame.rows = std::move(kept);
    }
  }

  void match_path(MatchState& state, std::size_t path_idx) {
    if (path_idx == state.clause->patterns.size()) {
      std::vector<NodeSymbol> assignment;
      assignment.reserve(state.new_vars.size());
      for (const auto& var : state.new_vars) assignment.push_back(state.bound.at(var));
      if (state.seen.insert(assignment).second) state.results.push_back(assignment);
      return;
    }
    const PathPattern& path = state.clause->patterns[path_idx];
    const NodePattern& first = path.nodes[0];
    auto descend = [&](const NodeSymbol& sym) {
      bind_node(state, first, sym,
                [&] { match_element(state, path_idx, 0, sym); });
    };
    if (first.variable && state.bound.count(*first.variable)) {
      descend(state.bound.at(*first.variable));
      return;
    }
    for (const auto& [sym, node] : graph_.nodes()) descend(sym);
  }

  void match_element(MatchState& state, std::size_t path_idx, std::size_t rel_idx,
                     const NodeSymbol& current) {
    const PathPattern& path = state.clause->patterns[path_idx];
    if (rel_idx == path.rels.size()) {
      match_path(state, path_idx + 1);
      return;
    }
    const RelPattern& rel = path.rels[rel_idx];
    const NodePattern& next_node = path.nodes[rel_idx + 1];
    auto continue_with = [&](const NodeSymbol& sym) {
      bind_node(state, next_node, sym,
                [&] { match_element(state, path_idx, rel_idx + 1, sym); });
    };
    if (!rel.variable_length) {
      for (const auto& neighbor : neighbors(current, rel)) {
        auto edge = claim_edge(state, rel.type, current, neighbor);
        if (!edge) continue;
        continue_with(neighbor);
        state.used_edges.erase(*edge);
      }
      return;
    }
    const int max = rel.max_hops >= 0 ? rel.max_hops : limits_.depth_cap;
    walk_variable_length(state, rel, current, 0, max, continue_with);
  }

  template <typename Cont>
  void walk_variable_length(MatchState& state, const RelPattern& rel,
                            const NodeSymbol& current, int depth, int max,
                            const Cont& continue_with) {
    if (depth >= rel.min_hops) continue_with(current);
    if (depth >= max) return;
    for (const auto& neighbor : neighbors(current, rel)) {
      auto edge = claim_edge(state, rel.type, current, neighbor);
      if (!edge) continue;
      walk_variable_length(state, rel, neighbor, depth + 1, max, continue_with);
      state.used_edges.erase(*edge);
    }
  }

  std::vector<NodeSymbol> neighbors(const NodeSymbol& from, const RelPattern& rel) {
    // Connectivity edges are stored once and traversed undirected.
    Direction dir = Direction::Either;
    if (!is_connectivity_edge(rel.type)) {
      if (rel.direction == RelDirection::Out) dir = Direction::Out;
      else if (rel.direction == RelDirection::In) dir = Direction::In;
    }
    return graph_.edges_from(from, rel.type, dir);
  }

  /// Marks the stored edge between `a` and `b` as used within this MATCH.
  /// Returns the claimed id, or nullopt when every stored orientation is
  /// already in use.
  std::optional<EdgeId> claim_edge(MatchState& state, EdgeType type, const NodeSymbol& a,
                                   const NodeSymbol& b) {
    const int t = static_cast<int>(type);
    for (const EdgeId& id : {EdgeId{t, a, b}, EdgeId{t, b, a}}) {
      const auto& [tt, src, dst] = id;
      if (!graph_.has_edge(src, dst, type)) continue;
      if (state.used_edges.count(id)) continue;
      state.used_edges.insert(id);
      return id;
    }
    return std::nullopt;
  }

  template <typename Cont>
  void bind_node(MatchState& state, const NodePattern& pattern, const NodeSymbol& sym,
                 const Cont& cont) {
    const GraphNode* node = graph_.node(sym);
    if (!node) return;
    if (pattern.label && *layer_from_label(*pattern.label) != node->layer) return;
    for (const auto& [key, expr] : pattern.properties) {
      const Value expected = eval(*expr, *state.frame, *state.row);
      const Value actual = node_property(sym, key);
      if (expected.is_null() || actual.is_null() || !values_equal(expected, actual)) return;
    }
    bool bound_here = false;
    if (pattern.variable) {
      auto it = state.bound.find(*pattern.variable);
      if (it != state.bound.end()) {
        if (it->second != sym) return;
      } else {
        state.bound.emplace(*pattern.variable, sym);
        bound_here = true;
      }
    }
    cont();
    if (bound_here) state.bound.erase(*pattern.variable);
  }

  // -- projection / aggregation ------------------------------------------------

  static std::string binding_name(const Projection& item) {
    if (item.alias) return *item.alias;
    if (const auto* var = std::get_if<Variable>(&item.expr->node)) return var->name;
    return item.text;
  }

  static bool has_variable_outside_aggregate(const Expr& e) {
    return std::visit(
        [](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Variable>) {
            return true;
          } else if constexpr (std::is_same_v<T, PropertyAccess>) {
            return has_variable_outside_aggregate(*n.target);
          } else if constexpr (std::is_same_v<T, FunctionCall>) {
            if (is_aggregate_function(n.name)) return false;
            for (const auto& a : n.args)
              if (has_variable_outside_aggregate(*a)) return true;
            return false;
          } else if constexpr (std::is_same_v<T, Binary>) {
            return has_variable_outside_aggregate(*n.lhs) ||
                   has_variable_outside_aggregate(*n.rhs);
          } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
            return has_variable_outside_aggregate(*n.child);
          } else if constexpr (std::is_same_v<T, ListLiteral>) {
            for (const auto& a : n.items)
              if (has_variable_outside_aggregate(*a)) return true;
            return false;
          } else {
            return false;
          }
        },
        e.node);
  }

  Value eval_aggregate(const FunctionCall& call, const Frame& frame,
                       const std::vector<const std::vector<Value>*>& group) {
    if (call.name == "count") {
      if (call.star) return Value{static_cast<std::int64_t>(group.size())};
      if (call.distinct) {
        std::set<Value> seen;
        for (const auto* row : group) {
          Value v = eval(*call.args[0], frame, *row);
          if (!v.is_null()) seen.insert(std::move(v));
        }
        return Value{static_cast<std::int64_t>(seen.size())};
      }
      std::int64_t n = 0;
      for (const auto* row : group)
        if (!eval(*call.args[0], frame, *row).is_null()) ++n;
      return Value{n};
    }
    if (call.name == "collect") {
      Value::List items;
      for (const auto* row : group) {
        Value v = eval(*call.args[0], frame, *row);
        if (!v.is_null()) items.push_back(std::move(v));
      }
      return Value{std::move(items)};
    }
    if (call.name == "sum" || call.name == "avg") {
      double total = 0;
      std::int64_t int_total = 0;
      bool all_int = true;
      std::int64_t n = 0;
      for (const auto* row : group) {
        Value v = eval(*call.args[0], frame, *row);
        if (v.is_null()) continue;
        if (!v.is_number())
          abort_eval(ErrorKind::TypeMismatch, call.name + "() requires numbers");
        if (v.is_int()) int_total += v.as_int();
        else all_int = false;
        total += v.as_double();
        ++n;
      }
      if (call.name == "sum") {
        if (n == 0) return Value{std::int64_t{0}};
        return all_int ? Value{int_total} : Value{total};
      }
      if (n == 0) return Value{};
      return Value{total / static_cast<double>(n)};
    }
    // min / max over the total value order, nulls skipped
    std::optional<Value> best;
    for (const auto* row : group) {
      Value v = eval(*call.args[0], frame, *row);
      if (v.is_null()) continue;
      if (!best) {
        best = std::move(v);
        continue;
      }
      const int c = Value::compare(v, *best);
      if ((call.name == "min" && c < 0) || (call.name == "max" && c > 0)) best = std::move(v);
    }
    return best ? *best : Value{};
  }

  Value eval_projection_item(const Expr& e, const Frame& frame,
                             const std::vector<const std::vector<Value>*>& group) {
    // Aggregate calls are computed over the group; everything around them is
    // constant within an aggregated projection item.
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FunctionCall>) {
            if (is_aggregate_function(n.name)) return eval_aggregate(n, frame, group);
            FunctionCall scalar = n;
            return eval_scalar_from_parts(scalar, frame, group);
          } else if constexpr (std::is_same_v<T, Binary>) {
            Binary b = n;
            Value lhs = eval_projection_item(*b.lhs, frame, group);
            Value rhs = eval_projection_item(*b.rhs, frame, group);
            Expr le{Literal{lhs}};
            Expr re{Literal{rhs}};
            Binary lifted{b.op, make_expr(std::move(le)), make_expr(std::move(re))};
            static const Frame kEmpty;
            static const std::vector<Value> kNoRow;
            return eval_binary(lifted, kEmpty, kNoRow);
          } else if constexpr (std::is_same_v<T, Not>) {
            return Value{!truthy(eval_projection_item(*n.child, frame, group))};
          } else if constexpr (std::is_same_v<T, Negate>) {
            Value v = eval_projection_item(*n.child, frame, group);
            if (v.is_int()) return Value{-v.as_int()};
            if (v.is_float()) return Value{-v.as_double()};
            abort_eval(ErrorKind::TypeMismatch, "unary minus requires a number");
          } else if constexpr (std::is_same_v<T, Literal>) {
            return n.value;
          } else {
            abort_eval(ErrorKind::UnsupportedFeature,
                       "non-aggregated expression mixed with aggregates in one projection");
          }
        },
        e.node);
  }

  Value eval_scalar_from_parts(const FunctionCall& call, const Frame& frame,
                               const std::vector<const std::vector<Value>*>& group) {
    FunctionCall lifted = call;
    lifted.args.clear();
    for (const auto& arg : call.args) {
      Expr lit{Literal{eval_projection_item(*arg, frame, group)}};
      lifted.args.push_back(make_expr(std::move(lit)));
    }
    static const Frame kEmpty;
    static const std::vector<Value> kNoRow;
    return eval_scalar_call(lifted, kEmpty, kNoRow);
  }

  /// Projects `frame` through `items`, applying implicit grouping when any
  /// item contains an aggregate. Group identity is the tuple of non-aggregate
  /// item values; groups keep first-occurrence order.
  Frame project(const Frame& frame, const std::vector<Projection>& items) {
    Frame out;
    std::vector<bool> aggregated(items.size());
    bool any_aggregate = false;
    for (std::size_t i = 0; i < items.size(); ++i) {
      aggregated[i] = contains_aggregate(*items[i].expr);
      any_aggregate = any_aggregate || aggregated[i];
      if (aggregated[i] && has_variable_outside_aggregate(*items[i].expr))
        abort_eval(ErrorKind::UnsupportedFeature,
                   "expression mixes grouped variables with aggregates; project the "
                   "group key separately");
      out.names.push_back(binding_name(items[i]));
    }

    if (!any_aggregate) {
      for (const auto& row : frame.rows) {
        std::vector<Value> projected;
        projected.reserve(items.size());
        for (const auto& item : items) projected.push_back(eval(*item.expr, frame, row));
        out.rows.push_back(std::move(projected));
      }
      return out;
    }

    std::map<std::vector<Value>, std::size_t> group_index;
    std::vector<std::vector<Value>> group_keys;
    std::vector<std::vector<const std::vector<Value>*>> groups;
    for (const auto& row : frame.rows) {
      std::vector<Value> key;
      for (std::size_t i = 0; i < items.size(); ++i)
        if (!aggregated[i]) key.push_back(eval(*items[i].expr, frame, row));
      auto [it, inserted] = group_index.try_emplace(key, groups.size());
      if (inserted) {
        group_keys.push_back(key);
        groups.push_back({});
      }
      groups[it->second].push_back(&row);
    }
    // Aggregation without group keys yields one row even over zero input rows.
    bool has_keys = false;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!aggregated[i]) has_keys = true;
    if (groups.empty() && !has_keys) {
      group_keys.push_back({});
      groups.push_back({});
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<Value> projected;
      std::size_t key_pos = 0;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!aggregated[i])
          projected.push_back(group_keys[g][key_pos++]);
        else
          projected.push_back(eval_projection_item(*items[i].expr, frame, groups[g]));
      }
      out.rows.push_back(std::move(projected));
    }
    return out;
  }

  void apply_with(Frame& frame, const WithClause& clause) {
    Frame projected = project(frame, clause.items);
    if (clause.where) {
      std::vector<std::vector<Value>> kept;
      for (auto& row : projected.rows)
        if (truthy(eval(**clause.where, projected, row))) kept.push_back(std::move(row));
      projected.rows = std::move(kept);
    }
    frame = std::move(projected);
  }

  ExecResult apply_return(Frame& frame, const ReturnClause& ret) {
    bool any_aggregate = false;
    for (const auto& item : ret.items)
      any_aggregate = any_aggregate || contains_aggregate(*item.expr);

    Frame projected = project(frame, ret.items);

    if (ret.distinct) {
      std::set<std::vector<Value>> seen;
      std::vector<std::vector<Value>> unique;
      for (auto& row : projected.rows)
        if (seen.insert(row).second) unique.push_back(std::move(row));
      projected.rows = std::move(unique);
    }

    if (!ret.order_by.empty()) {
      // Sort keys see the projection; when rows were neither grouped nor
      // deduplicated they may also reference the pre-projection variables.
      const bool projection_only = any_aggregate || ret.distinct;
      Frame key_frame;
      std::vector<std::vector<Value>> key_rows(projected.rows.size());
      if (projection_only) {
        key_frame.names = projected.names;
        for (std::size_t r = 0; r < projected.rows.size(); ++r)
          key_rows[r] = projected.rows[r];
      } else {
        key_frame.names = frame.names;
        key_frame.names.insert(key_frame.names.end(), projected.names.begin(),
                               projected.names.end());
        for (std::size_t r = 0; r < projected.rows.size(); ++r) {
          key_rows[r] = frame.rows[r];
          key_rows[r].insert(key_rows[r].end(), projected.rows[r].begin(),
                             projected.rows[r].end());
        }
      }
      // A key matching a projection item verbatim sorts by that column; this
      // also covers aggregate keys such as ORDER BY count(*).
      std::vector<std::optional<std::size_t>> key_column(ret.order_by.size());
      for (std::size_t k = 0; k < ret.order_by.size(); ++k)
        for (std::size_t c = 0; c < ret.items.size(); ++c)
          if (expr_equal(*ret.order_by[k].expr, *ret.items[c].expr)) {
            key_column[k] = c;
            break;
          }
      std::vector<std::vector<Value>> sort_keys(projected.rows.size());
      for (std::size_t r = 0; r < projected.rows.size(); ++r)
        for (std::size_t k = 0; k < ret.order_by.size(); ++k)
          sort_keys[r].push_back(key_column[k]
                                     ? projected.rows[r][*key_column[k]]
                                     : eval(*ret.order_by[k].expr, key_frame, key_rows[r]));
      std::vector<std::size_t> order(projected.rows.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 0; k < ret.order_by.size(); ++k) {
          const int c = Value::compare(sort_keys[a][k], sort_keys[b][k]);
          if (c != 0) return ret.order_by[k].ascending ? c < 0 : c > 0;
        }
        return false;
      });
      std::vector<std::vector<Value>> sorted;
      sorted.reserve(order.size());
      for (std::size_t i : order) sorted.push_back(std::move(projected.rows[i]));
      projected.rows = std::move(sorted);
    }

    if (ret.skip && *ret.skip > 0) {
      const std::size_t n = std::min<std::size_t>(*ret.skip, projected.rows.size());
      projected.rows.erase(projected.rows.begin(), projected.rows.begin() + n);
    }

    ResultTable table;
    for (const auto& item : ret.items) table.columns.push_back(item.column_name());
    table.total_rows = projected.rows.size();
    if (ret.limit && static_cast<std::size_t>(*ret.limit) < projected.rows.size())
      projected.rows.resize(*ret.limit);
    table.rows = std::move(projected.rows);
    return table;
  }

  ExecResult apply_set(Frame& frame, const QueryAst& ast) {
    std::int64_t mutated = 0;
    for (const auto& row : frame.rows) {
      for (const auto& item : ast.set_items) {
        auto idx = frame.find(item.variable);
        if (!idx)
          abort_eval(ErrorKind::UnknownIdentifier,
                     "variable '" + item.variable + "' is not defined");
        const Value& target = row[*idx];
        if (!target.is_node())
          abort_eval(ErrorKind::TypeMismatch, "SET target must be a node");
        Value value = eval(*item.value, frame, row);
        apply_property(target.as_node(), item.property, value);
        ++mutated;
      }
    }
    if (ast.return_clause) return apply_return(frame, *ast.return_clause);
    ResultTable table;
    table.columns = {"propertiesSet"};
    table.rows = {{Value{mutated}}};
    table.total_rows = 1;
    return table;
  }

  void apply_property(const NodeSymbol& symbol, const std::string& property,
                      const Value& value) {
    GraphNode* node = graph_.mutable_node(symbol);
    if (!node) abort_eval(ErrorKind::UnknownIdentifier, "node " + symbol.str() + " not found");
    if (property == "nodeSymbol")
      abort_eval(ErrorKind::UnsupportedFeature, "nodeSymbol is immutable");
    if (property == "class") {
      if (!value.is_string())
        abort_eval(ErrorKind::TypeMismatch, "class must be set to a string");
      node->semantic_class = value.as_string();
      return;
    }
    if (property == "center") {
      if (!value.is_point())
        abort_eval(ErrorKind::TypeMismatch, "center must be set to a point");
      node->center = value.as_point();
      node->center_printed = {print_number(node->center.x), print_number(node->center.y),
                              print_number(node->center.z)};
      return;
    }
    if (value.is_null()) {
      node->extra_properties.erase(property);
    } else if (value.is_bool()) {
      node->extra_properties[property] = std::get<bool>(value.data);
    } else if (value.is_int()) {
      node->extra_properties[property] = value.as_int();
    } else if (value.is_float()) {
      node->extra_properties[property] = value.as_double();
    } else if (value.is_string()) {
      node->extra_properties[property] = value.as_string();
    } else if (value.is_point()) {
      node->extra_properties[property] = value.as_point();
    } else {
      abort_eval(ErrorKind::TypeMismatch, "only scalar property values can be stored");
    }
    known_properties_.insert(property);
    graph_.record_extra_property(property);
  }

  PropertyGraph& graph_;
  ExecLimits limits_;
  std::set<std::string> known_properties_;
};

}  // namespace detail

/// Evaluates a parsed query. SET forms require exclusive graph access;
/// read-only queries may run concurrently.
inline ExecResult execute(PropertyGraph& graph, const QueryAst& ast,
                          const ExecLimits& limits = {}) {
  detail::Executor executor(graph, limits);
  return executor.run(ast);
}

/// Euclidean 3D distance between two point values.
inline Result<double, QueryError> point_distance(const Value& a, const Value& b) {
  if (!a.is_point() || !b.is_point())
    return QueryError{ErrorKind::TypeMismatch, "point.distance() requires two points", 0, 0};
  return a.as_point().distance(b.as_point());
}

/// Formats a float with at most three decimals, trimming trailing zeros.
inline std::string render_float(double d) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", d);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

inline std::string render_value(const Value& v) {
  if (v.is_null()) return "null";
  if (v.is_bool()) return std::get<bool>(v.data) ? "true" : "false";
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_float()) return render_float(v.as_double());
  if (v.is_string()) return v.as_string();
  if (v.is_point()) {
    const auto& p = v.as_point();
    return "POINT(" + render_float(p.x) + " " + render_float(p.y) + " " + render_float(p.z) +
           ")";
  }
  if (v.is_list()) {
    std::string out = "[";
    const auto& items = v.as_list();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += render_value(items[i]);
    }
    return out + "]";
  }
  return v.as_node().str();
}

/// Renders a result table as the text fed back to the LLM: a header line,
/// one line per row, and a truncation trailer past max_rows.
inline std::string render_result(const ResultTable& table, std::size_t max_rows = 50) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += " | ";
    out += table.columns[i];
  }
  if (table.rows.empty()) {
    out += "\n(0 rows)";
    return out;
  }
  const std::size_t shown = std::min(max_rows, table.rows.size());
  for (std::size_t r = 0; r < shown; ++r) {
    out += "\n";
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      if (c) out += " | ";
      out += render_value(table.rows[r][c]);
    }
  }
  if (table.rows.size() > max_rows)
    out += "\n(truncated, " + std::to_string(table.rows.size()) + " total rows)";
  return out;
}

}  // namespace sgg::query

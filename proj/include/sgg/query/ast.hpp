// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sgg/scene_graph.hpp"

namespace sgg::query {

/// Runtime value: null, boolean, integer, float, string, point, list, or a
/// node reference.
struct Value {
  using List = std::vector<Value>;
  std::variant<std::monostate, bool, std::int64_t, double, std::string, Point3, List,
               NodeSymbol>
      data;

  Value() = default;
  Value(bool b) : data(b) {}
  Value(std::int64_t i) : data(i) {}
  Value(int i) : data(static_cast<std::int64_t>(i)) {}
  Value(double d) : data(d) {}
  Value(std::string s) : data(std::move(s)) {}
  Value(const char* s) : data(std::string(s)) {}
  Value(Point3 p) : data(p) {}
  Value(List l) : data(std::move(l)) {}
  Value(NodeSymbol n) : data(n) {}

  bool is_null() const { return std::holds_alternative<std::monostate>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_float() const { return std::holds_alternative<double>(data); }
  bool is_number() const { return is_int() || is_float(); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_point() const { return std::holds_alternative<Point3>(data); }
  bool is_list() const { return std::holds_alternative<List>(data); }
  bool is_node() const { return std::holds_alternative<NodeSymbol>(data); }

  double as_double() const {
    return is_int() ? static_cast<double>(std::get<std::int64_t>(data)) : std::get<double>(data);
  }
  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  const std::string& as_string() const { return std::get<std::string>(data); }
  const Point3& as_point() const { return std::get<Point3>(data); }
  const List& as_list() const { return std::get<List>(data); }
  const NodeSymbol& as_node() const { return std::get<NodeSymbol>(data); }

  /// Total order over all values: by kind rank, then by content. Numbers of
  /// mixed integer/float kind compare numerically.
  static int compare(const Value& a, const Value& b) {
    const int ra = a.rank(), rb = b.rank();
    if (a.is_number() && b.is_number()) {
      const double x = a.as_double(), y = b.as_double();
      if (x < y) return -1;
      if (x > y) return 1;
      return 0;
    }
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (ra) {
      case 0: return 0;  // null
      case 1: {
        const bool x = std::get<bool>(a.data), y = std::get<bool>(b.data);
        return x == y ? 0 : (x < y ? -1 : 1);
      }
      case 3: return a.as_string().compare(b.as_string());
      case 4: {
        const auto& x = a.as_point();
        const auto& y = b.as_point();
        if (x == y) return 0;
        return x < y ? -1 : 1;
      }
      case 5: {
        const auto& x = a.as_list();
        const auto& y = b.as_list();
        for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
          const int c = compare(x[i], y[i]);
          if (c != 0) return c;
        }
        if (x.size() == y.size()) return 0;
        return x.size() < y.size() ? -1 : 1;
      }
      case 6: {
        const auto& x = a.as_node();
        const auto& y = b.as_node();
        if (x == y) return 0;
        return x < y ? -1 : 1;
      }
      default: return 0;
    }
  }

  bool operator==(const Value& other) const { return compare(*this, other) == 0; }
  bool operator<(const Value& other) const { return compare(*this, other) < 0; }

 private:
  int rank() const {
    if (is_null()) return 0;
    if (is_bool()) return 1;
    if (is_number()) return 2;
    if (is_string()) return 3;
    if (is_point()) return 4;
    if (is_list()) return 5;
    return 6;
  }
};

enum class BinaryOp {
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  In,
  StringContains,
};

inline const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
    case BinaryOp::In: return "IN";
    case BinaryOp::StringContains: return "CONTAINS";
  }
  return "?";
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  Value value;
};
struct Variable {
  std::string name;
};
struct PropertyAccess {
  ExprPtr target;
  std::string property;
};
struct FunctionCall {
  std::string name;  // lowercased; "count" with star==true for count(*)
  bool star = false;
  bool distinct = false;
  std::vector<ExprPtr> args;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Not {
  ExprPtr child;
};
struct Negate {
  ExprPtr child;
};
struct ListLiteral {
  std::vector<ExprPtr> items;
};

struct Expr {
  std::variant<Literal, Variable, PropertyAccess, FunctionCall, Binary, Not, Negate,
               ListLiteral>
      node;
};

inline ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

inline bool is_aggregate_function(const std::string& name) {
  return name == "count" || name == "sum" || name == "avg" || name == "min" ||
         name == "max" || name == "collect";
}

inline bool contains_aggregate(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FunctionCall>) {
          if (is_aggregate_function(n.name)) return true;
          for (const auto& a : n.args)
            if (contains_aggregate(*a)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, PropertyAccess>) {
          return contains_aggregate(*n.target);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return contains_aggregate(*n.lhs) || contains_aggregate(*n.rhs);
        } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
          return contains_aggregate(*n.child);
        } else if constexpr (std::is_same_v<T, ListLiteral>) {
          for (const auto& a : n.items)
            if (contains_aggregate(*a)) return true;
          return false;
        } else {
          return false;
        }
      },
      e.node);
}

struct NodePattern {
  std::optional<std::string> variable;
  std::optional<std::string> label;
  std::vector<std::pair<std::string, ExprPtr>> properties;  // equality constraints
};

enum class RelDirection { Out, In, Undirected };

struct RelPattern {
  EdgeType type = EdgeType::Contains;
  RelDirection direction = RelDirection::Out;
  bool variable_length = false;
  int min_hops = 1;
  int max_hops = -1;  // -1: bounded by the engine depth cap
};

/// Alternating node/relationship chain: nodes.size() == rels.size() + 1.
struct PathPattern {
  std::vector<NodePattern> nodes;
  std::vector<RelPattern> rels;
};

struct MatchClause {
  std::vector<PathPattern> patterns;
  std::optional<ExprPtr> where;
};

struct Projection {
  ExprPtr expr;
  std::optional<std::string> alias;
  std::string text;  // printed expression, used as the column name sans alias

  const std::string& column_name() const { return alias ? *alias : text; }
};

struct WithClause {
  std::vector<Projection> items;
  std::optional<ExprPtr> where;
};

struct OrderKey {
  ExprPtr expr;
  bool ascending = true;
};

struct ReturnClause {
  bool distinct = false;
  std::vector<Projection> items;
  std::vector<OrderKey> order_by;
  std::optional<std::int64_t> skip;
  std::optional<std::int64_t> limit;
};

struct SetItem {
  std::string variable;
  std::string property;
  ExprPtr value;
};

using ReadingClause = std::variant<MatchClause, WithClause>;

struct QueryAst {
  std::vector<ReadingClause> clauses;
  std::vector<SetItem> set_items;             // nonempty for SET queries
  std::optional<ReturnClause> return_clause;  // absent only for bare SET
};

// ---------------------------------------------------------------------------
// Pretty printer (round-trip: print + reparse yields a structurally identical
// AST).

inline std::string print_number(double d) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, ptr);
  // Keep float literals distinguishable from integers when reparsed.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

inline std::string print_expr(const Expr& e);

inline std::string print_value_literal(const Value& v) {
  if (v.is_null()) return "null";
  if (v.is_bool()) return std::get<bool>(v.data) ? "true" : "false";
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_float()) return print_number(v.as_double());
  if (v.is_string()) {
    std::string out = "'";
    for (char c : v.as_string()) {
      if (c == '\'' || c == '\\') out += '\\';
      out += c;
    }
    out += "'";
    return out;
  }
  return "null";  // points/lists/nodes never appear as parsed literals
}

inline std::string print_expr(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return print_value_literal(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, PropertyAccess>) {
          return print_expr(*n.target) + "." + n.property;
        } else if constexpr (std::is_same_v<T, FunctionCall>) {
          std::string out = n.name + "(";
          if (n.star) {
            out += "*";
          } else {
            if (n.distinct) out += "DISTINCT ";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
              if (i) out += ", ";
              out += print_expr(*n.args[i]);
            }
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          return "(" + print_expr(*n.lhs) + " " + binary_op_text(n.op) + " " +
                 print_expr(*n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Not>) {
          return "(NOT " + print_expr(*n.child) + ")";
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + print_expr(*n.child) + ")";
        } else {
          std::string out = "[";
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            if (i) out += ", ";
            out += print_expr(*n.items[i]);
          }
          return out + "]";
        }
      },
      e.node);
}

inline std::string print_pattern(const PathPattern& path) {
  std::string out;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const auto& n = path.nodes[i];
    out += "(";
    if (n.variable) out += *n.variable;
    if (n.label) out += ":" + *n.label;
    if (!n.properties.empty()) {
      out += " {";
      for (std::size_t j = 0; j < n.properties.size(); ++j) {
        if (j) out += ", ";
        out += n.properties[j].first + ": " + print_expr(*n.properties[j].second);
      }
      out += "}";
    }
    out += ")";
    if (i < path.rels.size()) {
      const auto& r = path.rels[i];
      out += r.direction == RelDirection::In ? "<-[" : "-[";
      out += ":";
      out += edge_type_name(r.type);
      if (r.variable_length) {
        out += "*";
        if (r.max_hops >= 0 || r.min_hops != 1) {
          out += std::to_string(r.min_hops) + "..";
          if (r.max_hops >= 0) out += std::to_string(r.max_hops);
        }
      }
      out += r.direction == RelDirection::Out ? "]->" : "]-";
    }
  }
  return out;
}

inline std::string print_projection(const Projection& p) {
  std::string out = print_expr(*p.expr);
  if (p.alias) out += " AS " + *p.alias;
  return out;
}

inline std::string print_query(const QueryAst& ast) {
  std::string out;
  auto append = [&out](const std::string& s) {
    if (!out.empty()) out += " ";
    out += s;
  };
  for (const auto& clause : ast.clauses) {
    if (const auto* m = std::get_if<MatchClause>(&clause)) {
      std::string s = "MATCH ";
      for (std::size_t i = 0; i < m->patterns.size(); ++i) {
        if (i) s += ", ";
        s += print_pattern(m->patterns[i]);
      }
      append(s);
      if (m->where) append("WHERE " + print_expr(**m->where));
    } else {
      const auto& w = std::get<WithClause>(clause);
      std::string s = "WITH ";
      for (std::size_t i = 0; i < w.items.size(); ++i) {
        if (i) s += ", ";
        s += print_projection(w.items[i]);
      }
      append(s);
      if (w.where) append("WHERE " + print_expr(**w.where));
    }
  }
  if (!ast.set_items.empty()) {
    std::string s = "SET ";
    for (std::size_t i = 0; i < ast.set_items.size(); ++i) {
      if (i) s += ", ";
      s += ast.set_items[i].variable + "." + ast.set_items[i].property + " = " +
           print_expr(*ast.set_items[i].value);
    }
    append(s);
  }
  if (ast.return_clause) {
    const auto& r = *ast.return_clause;
    std::string s = "RETURN ";
    if (r.distinct) s += "DISTINCT ";
    for (std::size_t i = 0; i < r.items.size(); ++i) {
      if (i) s += ", ";
      s += print_projection(r.items[i]);
    }
    append(s);
    if (!r.order_by.empty()) {
      std::string o = "ORDER BY ";
      for (std::size_t i = 0; i < r.order_by.size(); ++i) {
        if (i) o += ", ";
        o += print_expr(*r.order_by[i].expr);
        o += r.order_by[i].ascending ? " ASC" : " DESC";
      }
      append(o);
    }
    if (r.skip) append("SKIP " + std::to_string(*r.skip));
    if (r.limit) append("LIMIT " + std::to_string(*r.limit));
  }
  return out;
}

// Structural equality, used by the parser round-trip property tests.

inline bool expr_equal(const Expr& a, const Expr& b);

inline bool expr_ptr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* l = std::get_if<Literal>(&a.node))
    return l->value == std::get<Literal>(b.node).value;
  if (const auto* v = std::get_if<Variable>(&a.node))
    return v->name == std::get<Variable>(b.node).name;
  if (const auto* p = std::get_if<PropertyAccess>(&a.node)) {
    const auto& q = std::get<PropertyAccess>(b.node);
    return p->property == q.property && expr_ptr_equal(p->target, q.target);
  }
  if (const auto* f = std::get_if<FunctionCall>(&a.node)) {
    const auto& g = std::get<FunctionCall>(b.node);
    if (f->name != g.name || f->star != g.star || f->distinct != g.distinct ||
        f->args.size() != g.args.size())
      return false;
    for (std::size_t i = 0; i < f->args.size(); ++i)
      if (!expr_ptr_equal(f->args[i], g.args[i])) return false;
    return true;
  }
  if (const auto* x = std::get_if<Binary>(&a.node)) {
    const auto& y = std::get<Binary>(b.node);
    return x->op == y.op && expr_ptr_equal(x->lhs, y.lhs) && expr_ptr_equal(x->rhs, y.rhs);
  }
  if (const auto* n = std::get_if<Not>(&a.node))
    return expr_ptr_equal(n->child, std::get<Not>(b.node).child);
  if (const auto* n = std::get_if<Negate>(&a.node))
    return expr_ptr_equal(n->child, std::get<Negate>(b.node).child);
  const auto& l = std::get<ListLiteral>(a.node);
  const auto& r = std::get<ListLiteral>(b.node);
  if (l.items.size() != r.items.size()) return false;
  for (std::size_t i = 0; i < l.items.size(); ++i)
    if (!expr_ptr_equal(l.items[i], r.items[i])) return false;
  return true;
}

inline bool ast_equal(const QueryAst& a, const QueryAst& b) {
  auto proj_equal = [](const Projection& x, const Projection& y) {
    return x.alias == y.alias && expr_ptr_equal(x.expr, y.expr);
  };
  if (a.clauses.size() != b.clauses.size()) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (a.clauses[i].index() != b.clauses[i].index()) return false;
    if (const auto* m = std::get_if<MatchClause>(&a.clauses[i])) {
      const auto& n = std::get<MatchClause>(b.clauses[i]);
      if (m->patterns.size() != n.patterns.size()) return false;
      for (std::size_t j = 0; j < m->patterns.size(); ++j) {
        const auto& p = m->patterns[j];
        const auto& q = n.patterns[j];
        if (p.nodes.size() != q.nodes.size() || p.rels.size() != q.rels.size()) return false;
        for (std::size_t k = 0; k < p.nodes.size(); ++k) {
          if (p.nodes[k].variable != q.nodes[k].variable ||
              p.nodes[k].label != q.nodes[k].label ||
              p.nodes[k].properties.size() != q.nodes[k].properties.size())
            return false;
          for (std::size_t t = 0; t < p.nodes[k].properties.size(); ++t)
            if (p.nodes[k].properties[t].first != q.nodes[k].properties[t].first ||
                !expr_ptr_equal(p.nodes[k].properties[t].second,
                                q.nodes[k].properties[t].second))
              return false;
        }
        for (std::size_t k = 0; k < p.rels.size(); ++k) {
          const auto& r = p.rels[k];
          const auto& s = q.rels[k];
          if (r.type != s.type || r.direction != s.direction ||
              r.variable_length != s.variable_length || r.min_hops != s.min_hops ||
              r.max_hops != s.max_hops)
            return false;
        }
      }
      const auto& nw = n.where;
      if (m->where.has_value() != nw.has_value()) return false;
      if (m->where && !expr_ptr_equal(*m->where, *nw)) return false;
    } else {
      const auto& w = std::get<WithClause>(a.clauses[i]);
      const auto& x = std::get<WithClause>(b.clauses[i]);
      if (w.items.size() != x.items.size()) return false;
      for (std::size_t j = 0; j < w.items.size(); ++j)
        if (!proj_equal(w.items[j], x.items[j])) return false;
      if (w.where.has_value() != x.where.has_value()) return false;
      if (w.where && !expr_ptr_equal(*w.where, *x.where)) return false;
    }
  }
  if (a.set_items.size() != b.set_items.size()) return false;
  for (std::size_t i = 0; i < a.set_items.size(); ++i)
    if (a.set_items[i].variable != b.set_items[i].variable ||
        a.set_items[i].property != b.set_items[i].property ||
        !expr_ptr_equal(a.set_items[i].value, b.set_items[i].value))
      return false;
  if (a.return_clause.has_value() != b.return_clause.has_value()) return false;
  if (!a.return_clause) return true;
  const auto& r = *a.return_clause;
  const auto& s = *b.return_clause;
  if (r.distinct != s.distinct || r.items.size() != s.items.size() ||
      r.order_by.size() != s.order_by.size() || r.skip != s.skip || r.limit != s.limit)
    return false;
  for (std::size_t i = 0; i < r.items.size(); ++i)
    if (!proj_equal(r.items[i], s.items[i])) return false;
  for (std::size_t i = 0; i < r.order_by.size(); ++i)
    if (r.order_by[i].ascending != s.order_by[i].ascending ||
        !expr_ptr_equal(r.order_by[i].expr, s.order_by[i].expr))
      return false;
  return true;
}

}  // namespace sgg::query

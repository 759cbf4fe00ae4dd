// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgg/query/ast.hpp"
#include "sgg/query/lexer.hpp"
#include "sgg/result.hpp"

namespace sgg::query {

using ParseResult = Result<QueryAst, QueryError>;

namespace detail {

inline const std::set<std::string> kSupportedFunctions = {
    "point.distance", "abs", "tolower", "count", "sum", "avg", "min", "max", "collect"};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ParseResult run() {
    QueryAst ast;
    bool saw_reading_clause = false;
    while (true) {
      const Token& tok = peek();
      if (tok.kind == TokenKind::Keyword && tok.text == "MATCH") {
        MatchClause clause;
        if (!parse_match(clause)) return *error_;
        ast.clauses.emplace_back(std::move(clause));
        saw_reading_clause = true;
        continue;
      }
      if (tok.kind == TokenKind::Keyword && tok.text == "WITH") {
        WithClause clause;
        if (!parse_with(clause)) return *error_;
        ast.clauses.emplace_back(std::move(clause));
        saw_reading_clause = true;
        continue;
      }
      if (tok.kind == TokenKind::Keyword && tok.text == "SET") {
        if (!parse_set(ast)) return *error_;
        break;
      }
      if (tok.kind == TokenKind::Keyword && tok.text == "RETURN") {
        ReturnClause ret;
        if (!parse_return(ret)) return *error_;
        ast.return_clause = std::move(ret);
        break;
      }
      if (tok.kind == TokenKind::Keyword && is_unsupported_clause(tok.text)) {
        unsupported(tok, tok.text + " clause");
        return *error_;
      }
      expected(tok, saw_reading_clause ? "RETURN, SET, MATCH, or WITH" : "MATCH or WITH");
      return *error_;
    }
    if (peek().kind != TokenKind::End) {
      expected(peek(), "end of query");
      return *error_;
    }
    if (!validate(ast)) return *error_;
    return ast;
  }

 private:
  static bool is_unsupported_clause(const std::string& kw) {
    static const std::set<std::string> kClauses = {"CREATE", "DELETE", "MERGE",  "UNWIND",
                                                   "OPTIONAL", "CALL", "UNION",  "REMOVE",
                                                   "DETACH", "FOREACH"};
    return kClauses.count(kw) > 0;
  }

  const Token& peek(int ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool check(TokenKind kind) const { return peek().kind == kind; }
  bool check_keyword(const char* kw) const {
    return peek().kind == TokenKind::Keyword && peek().text == kw;
  }
  bool match(TokenKind kind) {
    if (!check(kind)) return false;
    advance();
    return true;
  }
  bool match_keyword(const char* kw) {
    if (!check_keyword(kw)) return false;
    advance();
    return true;
  }

  bool fail_parse(const Token& at, const std::string& message) {
    error_ = QueryError{ErrorKind::Parse, message, at.line, at.column};
    return false;
  }
  bool expected(const Token& at, const std::string& what) {
    std::string got = at.kind == TokenKind::End ? "end of input" : "'" + describe(at) + "'";
    return fail_parse(at, "expected " + what + ", got " + got);
  }
  bool unsupported(const Token& at, const std::string& what) {
    error_ = QueryError{ErrorKind::UnsupportedFeature,
                        what + " is not supported by this query engine", 0, 0};
    return false;
  }
  static std::string describe(const Token& tok) {
    switch (tok.kind) {
      case TokenKind::Identifier:
      case TokenKind::Keyword:
      case TokenKind::Integer:
      case TokenKind::Float: return tok.text;
      case TokenKind::String: return "'" + tok.text + "'";
      default: break;
    }
    static const char* kNames[] = {"", "", "", "", "", "(", ")", "[", "]", "{", "}",
                                   ",", ".", "..", ":", "|", "*", "+", "-", "/", "=",
                                   "<>", "<", "<=", ">", ">=", "->", "<-", ""};
    return kNames[static_cast<int>(tok.kind)];
  }

  // -- clauses --------------------------------------------------------------

  bool parse_match(MatchClause& clause) {
    advance();  // MATCH
    do {
      PathPattern path;
      if (!parse_path(path)) return false;
      clause.patterns.push_back(std::move(path));
    } while (match(TokenKind::Comma));
    if (match_keyword("WHERE")) {
      ExprPtr where;
      if (!parse_expr(where)) return false;
      clause.where = where;
    }
    return true;
  }

  bool parse_with(WithClause& clause) {
    advance();  // WITH
    if (!parse_projections(clause.items)) return false;
    if (match_keyword("WHERE")) {
      ExprPtr where;
      if (!parse_expr(where)) return false;
      clause.where = where;
    }
    return true;
  }

  bool parse_return(ReturnClause& ret) {
    advance();  // RETURN
    ret.distinct = match_keyword("DISTINCT");
    if (!parse_projections(ret.items)) return false;
    if (match_keyword("ORDER")) {
      if (!match_keyword("BY")) return expected(peek(), "BY after ORDER");
      do {
        OrderKey key;
        if (!parse_expr(key.expr)) return false;
        if (match_keyword("DESC"))
          key.ascending = false;
        else
          match_keyword("ASC");
        ret.order_by.push_back(std::move(key));
      } while (match(TokenKind::Comma));
    }
    if (match_keyword("SKIP")) {
      if (!check(TokenKind::Integer)) return expected(peek(), "an integer after SKIP");
      ret.skip = advance().int_value;
    }
    if (match_keyword("LIMIT")) {
      if (!check(TokenKind::Integer)) return expected(peek(), "an integer after LIMIT");
      ret.limit = advance().int_value;
    }
    return true;
  }

  bool parse_set(QueryAst& ast) {
    advance();  // SET
    do {
      SetItem item;
      if (!check(TokenKind::Identifier)) return expected(peek(), "a variable after SET");
      item.variable = advance().text;
      if (!match(TokenKind::Dot)) return expected(peek(), "'.' in SET target");
      if (!check(TokenKind::Identifier)) return expected(peek(), "a property name");
      item.property = advance().text;
      if (!match(TokenKind::Eq)) return expected(peek(), "'=' in SET assignment");
      if (!parse_expr(item.value)) return false;
      ast.set_items.push_back(std::move(item));
    } while (match(TokenKind::Comma));
    if (check_keyword("RETURN")) {
      ReturnClause ret;
      if (!parse_return(ret)) return false;
      ast.return_clause = std::move(ret);
    }
    return true;
  }

  bool parse_projections(std::vector<Projection>& items) {
    do {
      Projection p;
      if (!parse_expr(p.expr)) return false;
      p.text = print_expr(*p.expr);
      if (match_keyword("AS")) {
        if (!check(TokenKind::Identifier)) return expected(peek(), "an alias after AS");
        p.alias = advance().text;
      }
      items.push_back(std::move(p));
    } while (match(TokenKind::Comma));
    return true;
  }

  // -- patterns ---------------------------------------------------------------

  bool parse_path(PathPattern& path) {
    NodePattern first;
    if (!parse_node_pattern(first)) return false;
    path.nodes.push_back(std::move(first));
    while (check(TokenKind::Minus) || check(TokenKind::LeftArrow)) {
      RelPattern rel;
      if (!parse_rel_pattern(rel)) return false;
      NodePattern next;
      if (!parse_node_pattern(next)) return false;
      path.rels.push_back(rel);
      path.nodes.push_back(std::move(next));
    }
    return true;
  }

  bool parse_node_pattern(NodePattern& node) {
    if (!match(TokenKind::LParen)) return expected(peek(), "'(' starting a node pattern");
    if (check(TokenKind::Identifier)) node.variable = advance().text;
    if (match(TokenKind::Colon)) {
      if (!check(TokenKind::Identifier)) return expected(peek(), "a label after ':'");
      node.label = advance().text;
    }
    if (match(TokenKind::LBrace)) {
      if (!check(TokenKind::RBrace)) {
        do {
          if (!check(TokenKind::Identifier)) return expected(peek(), "a property name");
          std::string key = advance().text;
          if (!match(TokenKind::Colon)) return expected(peek(), "':' after property name");
          ExprPtr value;
          if (!parse_expr(value)) return false;
          node.properties.emplace_back(std::move(key), std::move(value));
        } while (match(TokenKind::Comma));
      }
      if (!match(TokenKind::RBrace)) return expected(peek(), "'}' closing the property map");
    }
    if (!match(TokenKind::RParen)) return expected(peek(), "')' closing the node pattern");
    return true;
  }

  bool parse_rel_pattern(RelPattern& rel) {
    const bool from_left = check(TokenKind::LeftArrow);
    advance();  // '-' or '<-'
    if (!match(TokenKind::LBracket)) return expected(peek(), "'[' in a relationship pattern");
    if (check(TokenKind::Identifier) &&
        (peek(1).kind == TokenKind::Colon || peek(1).kind == TokenKind::RBracket))
      return unsupported(peek(), "relationship variable '" + peek().text + "'");
    if (!match(TokenKind::Colon)) return expected(peek(), "':' before the relationship type");
    if (!check(TokenKind::Identifier) && !check_keyword("CONTAINS"))
      return expected(peek(), "a relationship type");
    const Token type_tok = advance();
    auto type = edge_type_from_name(type_tok.text);
    if (!type)
      return unsupported(type_tok, "relationship type '" + type_tok.text + "'");
    rel.type = *type;
    if (match(TokenKind::Star)) {
      rel.variable_length = true;
      if (check(TokenKind::Integer)) {
        rel.min_hops = static_cast<int>(advance().int_value);
        if (match(TokenKind::DotDot)) {
          if (check(TokenKind::Integer))
            rel.max_hops = static_cast<int>(advance().int_value);
        } else {
          rel.max_hops = rel.min_hops;  // exact-length form *n
        }
      } else if (match(TokenKind::DotDot)) {
        if (!check(TokenKind::Integer))
          return expected(peek(), "an upper bound after '..'");
        rel.max_hops = static_cast<int>(advance().int_value);
      }
      if (rel.min_hops < 1)
        return fail_parse(type_tok, "variable-length lower bound must be at least 1");
      if (rel.max_hops >= 0 && rel.max_hops < rel.min_hops)
        return fail_parse(type_tok, "variable-length bounds must satisfy min <= max");
    }
    if (!match(TokenKind::RBracket)) return expected(peek(), "']' in a relationship pattern");
    if (from_left) {
      if (!match(TokenKind::Minus)) return expected(peek(), "'-' after '<-[...]'");
      rel.direction = RelDirection::In;
    } else if (match(TokenKind::Arrow)) {
      rel.direction = RelDirection::Out;
    } else if (match(TokenKind::Minus)) {
      rel.direction = RelDirection::Undirected;
    } else {
      return expected(peek(), "'->' or '-' after the relationship");
    }
    return true;
  }

  // -- expressions ------------------------------------------------------------
  // Precedence: OR < AND < NOT < comparison/IN/CONTAINS < additive <
  // multiplicative < unary minus < property access < primary.

  bool parse_expr(ExprPtr& out) { return parse_or(out); }

  bool parse_or(ExprPtr& out) {
    if (!parse_and(out)) return false;
    while (match_keyword("OR")) {
      ExprPtr rhs;
      if (!parse_and(rhs)) return false;
      out = make_expr({Binary{BinaryOp::Or, out, rhs}});
    }
    return true;
  }

  bool parse_and(ExprPtr& out) {
    if (!parse_not(out)) return false;
    while (match_keyword("AND")) {
      ExprPtr rhs;
      if (!parse_not(rhs)) return false;
      out = make_expr({Binary{BinaryOp::And, out, rhs}});
    }
    return true;
  }

  bool parse_not(ExprPtr& out) {
    if (match_keyword("NOT")) {
      ExprPtr child;
      if (!parse_not(child)) return false;
      out = make_expr({Not{child}});
      return true;
    }
    return parse_comparison(out);
  }

  bool parse_comparison(ExprPtr& out) {
    if (!parse_additive(out)) return false;
    while (true) {
      std::optional<BinaryOp> op;
      if (check(TokenKind::Eq)) op = BinaryOp::Eq;
      else if (check(TokenKind::Ne)) op = BinaryOp::Ne;
      else if (check(TokenKind::Lt)) op = BinaryOp::Lt;
      else if (check(TokenKind::Le)) op = BinaryOp::Le;
      else if (check(TokenKind::Gt)) op = BinaryOp::Gt;
      else if (check(TokenKind::Ge)) op = BinaryOp::Ge;
      else if (check_keyword("IN")) op = BinaryOp::In;
      else if (check_keyword("CONTAINS")) op = BinaryOp::StringContains;
      else if (check_keyword("STARTS") || check_keyword("ENDS") || check_keyword("IS") ||
               check_keyword("XOR"))
        return unsupported(peek(), "operator '" + peek().text + "'");
      if (!op) return true;
      advance();
      ExprPtr rhs;
      if (!parse_additive(rhs)) return false;
      out = make_expr({Binary{*op, out, rhs}});
    }
  }

  bool parse_additive(ExprPtr& out) {
    if (!parse_multiplicative(out)) return false;
    while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
      const BinaryOp op = check(TokenKind::Plus) ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      ExprPtr rhs;
      if (!parse_multiplicative(rhs)) return false;
      out = make_expr({Binary{op, out, rhs}});
    }
    return true;
  }

  bool parse_multiplicative(ExprPtr& out) {
    if (!parse_unary(out)) return false;
    while (check(TokenKind::Star) || check(TokenKind::Slash)) {
      const BinaryOp op = check(TokenKind::Star) ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      ExprPtr rhs;
      if (!parse_unary(rhs)) return false;
      out = make_expr({Binary{op, out, rhs}});
    }
    return true;
  }

  bool parse_unary(ExprPtr& out) {
    if (match(TokenKind::Minus)) {
      ExprPtr child;
      if (!parse_unary(child)) return false;
      // Fold a negated numeric literal so printing round-trips cleanly.
      if (const auto* lit = std::get_if<Literal>(&child->node)) {
        if (lit->value.is_int()) {
          out = make_expr({Literal{Value{-lit->value.as_int()}}});
          return true;
        }
        if (lit->value.is_float()) {
          out = make_expr({Literal{Value{-lit->value.as_double()}}});
          return true;
        }
      }
      out = make_expr({Negate{child}});
      return true;
    }
    return parse_postfix(out);
  }

  bool parse_postfix(ExprPtr& out) {
    if (!parse_primary(out)) return false;
    while (check(TokenKind::Dot)) {
      if (peek(1).kind != TokenKind::Identifier)
        return expected(peek(1), "a property name after '.'");
      advance();
      std::string prop = advance().text;
      out = make_expr({PropertyAccess{out, std::move(prop)}});
    }
    return true;
  }

  bool parse_primary(ExprPtr& out) {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::Integer:
        advance();
        out = make_expr({Literal{Value{tok.int_value}}});
        return true;
      case TokenKind::Float:
        advance();
        out = make_expr({Literal{Value{tok.float_value}}});
        return true;
      case TokenKind::String:
        advance();
        out = make_expr({Literal{Value{tok.text}}});
        return true;
      case TokenKind::Keyword:
        if (tok.text == "TRUE") {
          advance();
          out = make_expr({Literal{Value{true}}});
          return true;
        }
        if (tok.text == "FALSE") {
          advance();
          out = make_expr({Literal{Value{false}}});
          return true;
        }
        if (tok.text == "NULL") {
          advance();
          out = make_expr({Literal{Value{}}});
          return true;
        }
        if (tok.text == "CASE" || tok.text == "EXISTS")
          return unsupported(tok, tok.text + " expression");
        return expected(tok, "an expression");
      case TokenKind::LParen: {
        advance();
        if (!parse_expr(out)) return false;
        if (!match(TokenKind::RParen)) return expected(peek(), "')'");
        return true;
      }
      case TokenKind::LBracket: {
        advance();
        ListLiteral list;
        if (!check(TokenKind::RBracket)) {
          do {
            ExprPtr item;
            if (!parse_expr(item)) return false;
            list.items.push_back(std::move(item));
          } while (match(TokenKind::Comma));
        }
        if (!match(TokenKind::RBracket)) return expected(peek(), "']'");
        out = make_expr({std::move(list)});
        return true;
      }
      case TokenKind::Identifier: return parse_identifier_expr(out);
      default: return expected(tok, "an expression");
    }
  }

  bool parse_identifier_expr(ExprPtr& out) {
    // Collect a dotted chain; if it ends in '(' it is a function call (so
    // point.distance(...) parses as one name), otherwise a variable followed
    // by property accesses.
    const Token first = advance();
    std::vector<std::string> chain = {first.text};
    // Lookahead: join the full dotted chain only when a call follows, so
    // point.distance(...) and apoc.foo.bar(...) each parse as one call name
    // while o.center.x stays a property access.
    std::size_t look = 0;
    std::size_t segments = 0;
    while (peek(look).kind == TokenKind::Dot && peek(look + 1).kind == TokenKind::Identifier) {
      ++segments;
      look += 2;
    }
    if (segments > 0 && peek(look).kind == TokenKind::LParen) {
      for (std::size_t i = 0; i < segments; ++i) {
        advance();  // '.'
        chain.push_back(advance().text);
      }
    }
    if (check(TokenKind::LParen) ) {
      std::string name;
      for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) name += ".";
        name += chain[i];
      }
      return parse_call(first, name, out);
    }
    if (chain.size() > 1) {
      // Chain was collected but no call follows; rebuild as property access.
      out = make_expr({Variable{chain[0]}});
      for (std::size_t i = 1; i < chain.size(); ++i)
        out = make_expr({PropertyAccess{out, chain[i]}});
      return true;
    }
    out = make_expr({Variable{first.text}});
    return true;
  }

  bool parse_call(const Token& at, const std::string& raw_name, ExprPtr& out) {
    std::string name;
    for (char c : raw_name) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!kSupportedFunctions.count(name))
      return unsupported(at, "function '" + raw_name + "'");
    advance();  // '('
    FunctionCall call;
    call.name = name;
    if (name == "count" && check(TokenKind::Star)) {
      advance();
      call.star = true;
      if (!match(TokenKind::RParen)) return expected(peek(), "')' after count(*)");
      out = make_expr({std::move(call)});
      return true;
    }
    if (match_keyword("DISTINCT")) {
      if (name != "count")
        return unsupported(at, "DISTINCT inside " + raw_name + "()");
      call.distinct = true;
    }
    if (!check(TokenKind::RParen)) {
      do {
        ExprPtr arg;
        if (!parse_expr(arg)) return false;
        call.args.push_back(std::move(arg));
      } while (match(TokenKind::Comma));
    }
    if (!match(TokenKind::RParen)) return expected(peek(), "')' closing the call");
    const std::size_t arity = call.args.size();
    const bool arity_ok =
        (name == "point.distance" && arity == 2) ||
        ((name == "abs" || name == "tolower") && arity == 1) ||
        (is_aggregate_function(name) && arity == 1);
    if (!arity_ok)
      return fail_parse(at, "wrong number of arguments to " + raw_name + "()");
    if (is_aggregate_function(name))
      for (const auto& arg : call.args)
        if (contains_aggregate(*arg))
          return fail_parse(at, "aggregate functions may not be nested");
    out = make_expr({std::move(call)});
    return true;
  }

  // -- semantic validation ------------------------------------------------------

  bool validate(QueryAst& ast) {
    std::set<std::string> scope;
    for (auto& clause : ast.clauses) {
      if (auto* m = std::get_if<MatchClause>(&clause)) {
        for (const auto& path : m->patterns)
          for (const auto& node : path.nodes)
            for (const auto& [key, expr] : node.properties) {
              if (!check_vars(*expr, scope)) return false;
              if (contains_aggregate(*expr))
                return aggregate_misuse("a pattern property map");
            }
        for (const auto& path : m->patterns)
          for (const auto& node : path.nodes)
            if (node.variable) scope.insert(*node.variable);
        if (m->where) {
          if (!check_vars(**m->where, scope)) return false;
          if (contains_aggregate(**m->where)) return aggregate_misuse("a WHERE clause");
        }
      } else {
        auto& w = std::get<WithClause>(clause);
        std::set<std::string> next_scope;
        for (auto& item : w.items) {
          if (!check_vars(*item.expr, scope)) return false;
          next_scope.insert(column_binding(item));
        }
        scope = std::move(next_scope);
        if (w.where) {
          if (!check_vars(**w.where, scope)) return false;
          if (contains_aggregate(**w.where)) return aggregate_misuse("a WHERE clause");
        }
      }
    }
    for (const auto& item : ast.set_items) {
      if (!scope.count(item.variable))
        return undefined_variable(item.variable);
      if (!check_vars(*item.value, scope)) return false;
      if (contains_aggregate(*item.value)) return aggregate_misuse("a SET assignment");
    }
    if (ast.return_clause) {
      auto& r = *ast.return_clause;
      std::set<std::string> order_scope = scope;
      bool any_aggregate = false;
      for (auto& item : r.items) {
        if (!check_vars(*item.expr, scope)) return false;
        any_aggregate = any_aggregate || contains_aggregate(*item.expr);
        order_scope.insert(column_binding(item));
      }
      if (any_aggregate || r.distinct) {
        // Grouped or deduplicated output: ORDER BY sees only the projection.
        order_scope.clear();
        for (const auto& item : r.items) order_scope.insert(column_binding(item));
      }
      for (const auto& key : r.order_by) {
        // A key matching a projection item verbatim sorts by that column even
        // when grouping or DISTINCT hides the pre-projection variables.
        bool matches_item = false;
        for (const auto& item : r.items)
          if (expr_equal(*key.expr, *item.expr)) {
            matches_item = true;
            break;
          }
        if (!matches_item && !check_vars(*key.expr, order_scope)) return false;
        if (contains_aggregate(*key.expr) && !matches_item)
          return aggregate_misuse("an ORDER BY key");
      }
    }
    return true;
  }

  static std::string column_binding(const Projection& item) {
    if (item.alias) return *item.alias;
    if (const auto* var = std::get_if<Variable>(&item.expr->node)) return var->name;
    return item.text;
  }

  bool aggregate_misuse(const std::string& where) {
    error_ = QueryError{ErrorKind::Parse,
                        "aggregate functions may only appear in WITH or RETURN "
                        "projections, not in " + where,
                        0, 0};
    return false;
  }

  bool undefined_variable(const std::string& name) {
    error_ = QueryError{ErrorKind::UnknownIdentifier,
                        "variable '" + name + "' is not defined", 0, 0};
    return false;
  }

  bool check_vars(const Expr& e, const std::set<std::string>& scope) {
    bool ok = true;
    walk_vars(e, [&](const std::string& name) {
      if (ok && !scope.count(name)) {
        undefined_variable(name);
        ok = false;
      }
    });
    return ok;
  }

  template <typename F>
  static void walk_vars(const Expr& e, F&& fn) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Variable>) {
            fn(n.name);
          } else if constexpr (std::is_same_v<T, PropertyAccess>) {
            walk_vars(*n.target, fn);
          } else if constexpr (std::is_same_v<T, FunctionCall>) {
            for (const auto& a : n.args) walk_vars(*a, fn);
          } else if constexpr (std::is_same_v<T, Binary>) {
            walk_vars(*n.lhs, fn);
            walk_vars(*n.rhs, fn);
          } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
            walk_vars(*n.child, fn);
          } else if constexpr (std::is_same_v<T, ListLiteral>) {
            for (const auto& a : n.items) walk_vars(*a, fn);
          }
        },
        e.node);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::optional<QueryError> error_;
};

}  // namespace detail

/// Parses a query in the supported Cypher subset. Unsupported constructs
/// (apoc.*, CREATE, relationship variables, ...) yield unsupported-feature
/// errors naming the construct.
inline ParseResult parse_query(const std::string& text) {
  Lexer lexer(text);
  std::vector<Token> tokens;
  QueryError error;
  if (!lexer.run(tokens, error)) return error;
  detail::Parser parser(std::move(tokens));
  return parser.run();
}

}  // namespace sgg::query

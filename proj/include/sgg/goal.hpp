// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgg/scene_graph.hpp"

namespace sgg::goal {

class GoalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Allowed argument layers per position; a position may admit several layers
/// (e.g. at-place takes a Place or a MeshPlace).
struct PredicateSchema {
  std::string name;  // lowercase
  std::vector<std::vector<Layer>> argument_layers;

  std::size_t arity() const { return argument_layers.size(); }
};

inline std::vector<PredicateSchema> default_predicate_schemas() {
  const std::vector<Layer> place = {Layer::Place, Layer::MeshPlace};
  const std::vector<Layer> object = {Layer::Object};
  const std::vector<Layer> room = {Layer::Room};
  return {
      {"visited-place", {place}},   {"at-place", {place}},
      {"visited-object", {object}}, {"at-object", {object}},
      {"safe", {object}},           {"holding", {object}},
      {"visited-room", {room}},     {"in-room", {room}},
      {"object-in-place", {object, place}},
  };
}

struct GoalExpr;
using GoalPtr = std::shared_ptr<GoalExpr>;

struct Atom {
  std::string predicate;  // lowercased
  std::vector<std::string> arguments;

  auto operator<=>(const Atom&) const = default;

  std::string str() const {
    std::string out = "(" + predicate;
    for (const auto& a : arguments) out += " " + a;
    return out + ")";
  }
};

struct GoalExpr {
  enum class Kind { Atom, Not, And, Or };
  Kind kind = Kind::Atom;
  Atom atom;
  std::vector<GoalPtr> children;
};

inline GoalPtr make_atom(Atom a) {
  auto g = std::make_shared<GoalExpr>();
  g->kind = GoalExpr::Kind::Atom;
  g->atom = std::move(a);
  return g;
}

inline GoalPtr make_node(GoalExpr::Kind kind, std::vector<GoalPtr> children) {
  auto g = std::make_shared<GoalExpr>();
  g->kind = kind;
  g->children = std::move(children);
  return g;
}

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct SExpr {
  // Either a token or a parenthesized list.
  std::string token;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprParser {
 public:
  explicit SExprParser(std::string_view text) : text_(text) {}

  SExpr run() {
    SExpr e = parse();
    skip_ws();
    if (pos_ != text_.size()) throw GoalError("trailing input after goal expression");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {  // line comment
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw GoalError("unexpected end of goal expression");
    if (text_[pos_] == '(') {
      ++pos_;
      SExpr out;
      out.is_list = true;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) throw GoalError("unbalanced parentheses in goal expression");
        if (text_[pos_] == ')') {
          ++pos_;
          return out;
        }
        out.list.push_back(parse());
      }
    }
    if (text_[pos_] == ')') throw GoalError("unbalanced parentheses in goal expression");
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    SExpr out;
    out.token = std::string(text_.substr(start, pos_ - start));
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline GoalPtr build_goal(const SExpr& e, const std::vector<PredicateSchema>& schemas) {
  if (!e.is_list) throw GoalError("expected a parenthesized expression, got '" + e.token + "'");
  if (e.list.empty()) throw GoalError("empty expression");
  if (e.list[0].is_list) throw GoalError("expected an operator or predicate name");
  const std::string head = lowercase(e.list[0].token);
  if (head == "and" || head == "or") {
    if (e.list.size() < 2) throw GoalError("'" + head + "' needs at least one operand");
    std::vector<GoalPtr> children;
    for (std::size_t i = 1; i < e.list.size(); ++i)
      children.push_back(build_goal(e.list[i], schemas));
    if (children.size() == 1) return children[0];  // single-child and/or flattened
    return make_node(head == "and" ? GoalExpr::Kind::And : GoalExpr::Kind::Or,
                     std::move(children));
  }
  if (head == "not") {
    if (e.list.size() != 2) throw GoalError("'not' takes exactly one operand");
    return make_node(GoalExpr::Kind::Not, {build_goal(e.list[1], schemas)});
  }
  // Atom.
  const PredicateSchema* schema = nullptr;
  for (const auto& s : schemas)
    if (s.name == head) schema = &s;
  if (!schema) throw GoalError("unknown predicate '" + e.list[0].token + "'");
  Atom atom;
  atom.predicate = head;
  for (std::size_t i = 1; i < e.list.size(); ++i) {
    if (e.list[i].is_list) throw GoalError("predicate arguments must be symbols");
    atom.arguments.push_back(e.list[i].token);
  }
  if (atom.arguments.size() != schema->arity())
    throw GoalError("predicate '" + head + "' takes " + std::to_string(schema->arity()) +
                    " argument(s), got " + std::to_string(atom.arguments.size()) + " in " +
                    atom.str());
  return make_atom(std::move(atom));
}

}  // namespace detail

inline GoalPtr parse_goal(std::string_view text,
                          const std::vector<PredicateSchema>& schemas =
                              default_predicate_schemas()) {
  detail::SExprParser parser(text);
  return detail::build_goal(parser.run(), schemas);
}

/// Loads predicate schemas from a configuration document of the form
/// [{"name": ..., "arguments": [["Place","MeshPlace"], ...]}, ...].
inline std::vector<PredicateSchema> load_predicate_schemas(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (!doc.is_array()) throw GoalError("schema configuration must be a JSON array");
  std::vector<PredicateSchema> schemas;
  for (const auto& entry : doc) {
    PredicateSchema schema;
    schema.name = detail::lowercase(entry.at("name").get<std::string>());
    for (const auto& s : schemas)
      if (s.name == schema.name) throw GoalError("duplicate predicate '" + schema.name + "'");
    for (const auto& position : entry.at("arguments")) {
      std::vector<Layer> layers;
      for (const auto& name : position) {
        const std::string text = name.get<std::string>();
        if (text == "Object") layers.push_back(Layer::Object);
        else if (text == "MeshPlace") layers.push_back(Layer::MeshPlace);
        else if (text == "Place") layers.push_back(Layer::Place);
        else if (text == "Room") layers.push_back(Layer::Room);
        else throw GoalError("unknown layer '" + text + "' in schema configuration");
      }
      if (layers.empty()) throw GoalError("empty layer constraint in schema configuration");
      schema.argument_layers.push_back(std::move(layers));
    }
    if (schema.arity() < 1 || schema.arity() > 2)
      throw GoalError("predicate '" + schema.name + "' must have arity 1 or 2");
    schemas.push_back(std::move(schema));
  }
  return schemas;
}

struct Literal {
  Atom atom;
  bool positive = true;

  auto operator<=>(const Literal&) const = default;
};

using Term = std::set<Literal>;

struct Dnf {
  std::set<Term> terms;  // empty set of terms = false; term {} = true

  bool operator==(const Dnf&) const = default;
};

inline constexpr std::size_t kDefaultTermGuard = 100000;

namespace detail {

inline void guard_terms(std::size_t count, std::size_t guard) {
  if (count > guard)
    throw GoalError("DNF term count exceeded the guard of " + std::to_string(guard));
}

// Negation-normal-form recursion producing raw terms (before absorption).
inline std::set<Term> dnf_terms(const GoalExpr& g, bool negated, std::size_t guard) {
  switch (g.kind) {
    case GoalExpr::Kind::Atom:
      return {Term{Literal{g.atom, !negated}}};
    case GoalExpr::Kind::Not:
      return dnf_terms(*g.children[0], !negated, guard);
    case GoalExpr::Kind::And:
    case GoalExpr::Kind::Or: {
      const bool disjunctive = (g.kind == GoalExpr::Kind::Or) != negated;
      if (disjunctive) {
        std::set<Term> out;
        for (const auto& child : g.children) {
          for (auto& term : dnf_terms(*child, negated, guard)) out.insert(term);
          guard_terms(out.size(), guard);
        }
        return out;
      }
      // Conjunction: distribute the cross product, dropping contradictions.
      std::set<Term> acc = {Term{}};
      for (const auto& child : g.children) {
        std::set<Term> child_terms = dnf_terms(*child, negated, guard);
        std::set<Term> next;
        for (const auto& left : acc) {
          for (const auto& right : child_terms) {
            Term merged = left;
            bool contradiction = false;
            for (const auto& lit : right) {
              if (merged.count(Literal{lit.atom, !lit.positive})) {
                contradiction = true;
                break;
              }
              merged.insert(lit);
            }
            if (!contradiction) next.insert(std::move(merged));
            guard_terms(next.size(), guard);
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace detail

namespace detail {

inline std::set<Term> absorb(const std::set<Term>& terms) {
  std::set<Term> out;
  for (const auto& term : terms) {
    bool absorbed = false;
    for (const auto& other : terms)
      if (other != term &&
          std::includes(term.begin(), term.end(), other.begin(), other.end())) {
        absorbed = true;
        break;
      }
    if (!absorbed) out.insert(term);
  }
  return out;
}

// Consensus of two terms clashing on exactly one atom, or nullopt.
inline std::optional<Term> consensus(const Term& a, const Term& b) {
  const Atom* clash = nullptr;
  for (const auto& lit : a) {
    if (b.count(Literal{lit.atom, !lit.positive})) {
      if (clash) return std::nullopt;  // two clashes cancel out
      clash = &lit.atom;
    }
  }
  if (!clash) return std::nullopt;
  Term merged;
  for (const auto& lit : a)
    if (!(lit.atom == *clash)) merged.insert(lit);
  for (const auto& lit : b)
    if (!(lit.atom == *clash)) merged.insert(lit);
  return merged;
}

}  // namespace detail

/// Canonical DNF (Blake canonical form): negation pushed to atoms,
/// distribution applied, contradictory terms dropped, then consensus closure
/// and absorption. Unique per boolean function, so Dnf equality decides
/// logical equivalence.
inline Dnf to_dnf(const GoalExpr& goal, std::size_t term_guard = kDefaultTermGuard) {
  std::set<Term> terms = detail::absorb(detail::dnf_terms(goal, false, term_guard));
  while (true) {
    std::set<Term> additions;
    auto subsumed = [&](const Term& t) {
      for (const auto& other : terms)
        if (std::includes(t.begin(), t.end(), other.begin(), other.end())) return true;
      return false;
    };
    for (auto i = terms.begin(); i != terms.end(); ++i) {
      for (auto j = std::next(i); j != terms.end(); ++j) {
        auto merged = detail::consensus(*i, *j);
        if (merged && !subsumed(*merged)) additions.insert(std::move(*merged));
      }
    }
    if (additions.empty()) break;
    for (auto& term : additions) {
      terms.insert(term);
      detail::guard_terms(terms.size(), term_guard);
    }
    terms = detail::absorb(terms);
  }
  Dnf out;
  out.terms = std::move(terms);
  return out;
}

namespace detail {

inline void collect_atoms(const GoalExpr& g, std::set<Atom>& atoms) {
  if (g.kind == GoalExpr::Kind::Atom) {
    atoms.insert(g.atom);
    return;
  }
  for (const auto& child : g.children) collect_atoms(*child, atoms);
}

inline bool evaluate(const GoalExpr& g, const std::map<Atom, bool>& assignment) {
  switch (g.kind) {
    case GoalExpr::Kind::Atom: return assignment.at(g.atom);
    case GoalExpr::Kind::Not: return !evaluate(*g.children[0], assignment);
    case GoalExpr::Kind::And:
      for (const auto& child : g.children)
        if (!evaluate(*child, assignment)) return false;
      return true;
    case GoalExpr::Kind::Or:
      for (const auto& child : g.children)
        if (evaluate(*child, assignment)) return true;
      return false;
  }
  return false;
}

inline bool evaluate_dnf(const Dnf& dnf, const std::map<Atom, bool>& assignment) {
  for (const auto& term : dnf.terms) {
    bool satisfied = true;
    for (const auto& lit : term) {
      auto it = assignment.find(lit.atom);
      const bool value = it != assignment.end() && it->second;
      if (value != lit.positive) {
        satisfied = false;
        break;
      }
    }
    if (satisfied) return true;
  }
  return false;
}

}  // namespace detail

inline constexpr std::size_t kTruthTableAtomLimit = 16;

/// Logical equivalence: truth table over the atom union when it has at most
/// 16 atoms (authoritative), canonical-DNF equality otherwise.
inline bool goals_equivalent(const GoalExpr& a, const GoalExpr& b,
                             std::size_t term_guard = kDefaultTermGuard) {
  std::set<Atom> atom_set;
  detail::collect_atoms(a, atom_set);
  detail::collect_atoms(b, atom_set);
  std::vector<Atom> atoms(atom_set.begin(), atom_set.end());
  if (atoms.size() <= kTruthTableAtomLimit) {
    const std::uint64_t combos = std::uint64_t{1} << atoms.size();
    std::map<Atom, bool> assignment;
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
      for (std::size_t i = 0; i < atoms.size(); ++i)
        assignment[atoms[i]] = (mask >> i) & 1;
      if (detail::evaluate(a, assignment) != detail::evaluate(b, assignment)) return false;
    }
    return true;
  }
  return to_dnf(a, term_guard) == to_dnf(b, term_guard);
}

struct GroundingIssue {
  Atom atom;
  std::size_t argument_index = 0;
  std::string message;
};

/// One issue per argument whose symbol is missing from the graph or whose
/// layer violates the predicate schema.
inline std::vector<GroundingIssue> check_grounding(
    const GoalExpr& goal, const PropertyGraph& graph,
    const std::vector<PredicateSchema>& schemas = default_predicate_schemas()) {
  std::vector<GroundingIssue> issues;
  std::set<Atom> atoms;
  detail::collect_atoms(goal, atoms);
  for (const auto& atom : atoms) {
    const PredicateSchema* schema = nullptr;
    for (const auto& s : schemas)
      if (s.name == atom.predicate) schema = &s;
    if (!schema) continue;  // parse_goal already rejects unknown predicates
    for (std::size_t i = 0; i < atom.arguments.size() && i < schema->arity(); ++i) {
      const std::string& symbol_text = atom.arguments[i];
      auto symbol = NodeSymbol::parse(symbol_text);
      const GraphNode* node = symbol ? graph.node(*symbol) : nullptr;
      if (!node) {
        issues.push_back({atom, i, symbol_text + " not in graph"});
        continue;
      }
      const auto& allowed = schema->argument_layers[i];
      if (std::find(allowed.begin(), allowed.end(), node->layer) == allowed.end()) {
        std::string expected;
        for (std::size_t k = 0; k < allowed.size(); ++k) {
          if (k) expected += " or ";
          expected += layer_name(allowed[k]);
        }
        issues.push_back({atom, i,
                          symbol_text + " is a " + std::string(layer_name(node->layer)) +
                              ", expected " + expected});
      }
    }
  }
  return issues;
}

/// Renders a goal back to s-expression text (lowercased operators and
/// predicates, symbols verbatim).
inline std::string render_goal(const GoalExpr& g) {
  switch (g.kind) {
    case GoalExpr::Kind::Atom: return g.atom.str();
    case GoalExpr::Kind::Not: return "(not " + render_goal(*g.children[0]) + ")";
    case GoalExpr::Kind::And:
    case GoalExpr::Kind::Or: {
      std::string out = g.kind == GoalExpr::Kind::And ? "(and" : "(or";
      for (const auto& child : g.children) out += " " + render_goal(*child);
      return out + ")";
    }
  }
  return "";
}

}  // namespace sgg::goal

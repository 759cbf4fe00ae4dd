// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgg {

/// Error thrown for malformed or schema-violating input documents.
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

/// JSON value tree that keeps the raw lexeme of every floating-point number,
/// so that a value like 9.10 can be echoed back with its printed precision.
struct JsonTree {
  enum class Kind { Null, Boolean, Integer, Double, String, Array, Object };

  Kind kind = Kind::Null;
  bool boolean = false;
  std::int64_t integer = 0;
  double number = 0.0;
  std::string raw;  // original token text for Double, empty otherwise
  std::string text;
  std::vector<JsonTree> items;                              // Array
  std::vector<std::pair<std::string, JsonTree>> members;    // Object, in document order

  bool is_object() const { return kind == Kind::Object; }
  bool is_array() const { return kind == Kind::Array; }
  bool is_string() const { return kind == Kind::String; }
  bool is_number() const { return kind == Kind::Integer || kind == Kind::Double; }

  double as_double() const { return kind == Kind::Integer ? static_cast<double>(integer) : number; }

  /// Printed form of a numeric leaf: the original lexeme when available.
  std::string printed() const {
    if (kind == Kind::Integer) return std::to_string(integer);
    return raw;
  }

  const JsonTree* find(const std::string& key) const {
    for (const auto& [k, v] : members)
      if (k == key) return &v;
    return nullptr;
  }
};

namespace detail {

class TreeSax {
 public:
  using json = nlohmann::json;

  bool null() { return emplace(JsonTree{}); }
  bool boolean(bool v) {
    JsonTree t;
    t.kind = JsonTree::Kind::Boolean;
    t.boolean = v;
    return emplace(std::move(t));
  }
  bool number_integer(json::number_integer_t v) {
    JsonTree t;
    t.kind = JsonTree::Kind::Integer;
    t.integer = v;
    return emplace(std::move(t));
  }
  bool number_unsigned(json::number_unsigned_t v) {
    JsonTree t;
    t.kind = JsonTree::Kind::Integer;
    t.integer = static_cast<std::int64_t>(v);
    return emplace(std::move(t));
  }
  bool number_float(json::number_float_t v, const std::string& s) {
    JsonTree t;
    t.kind = JsonTree::Kind::Double;
    t.number = v;
    t.raw = s;
    return emplace(std::move(t));
  }
  bool string(std::string& v) {
    JsonTree t;
    t.kind = JsonTree::Kind::String;
    t.text = v;
    return emplace(std::move(t));
  }
  bool binary(json::binary_t&) { return false; }
  bool start_object(std::size_t) { return push_container(JsonTree::Kind::Object); }
  bool key(std::string& k) {
    pending_key_ = k;
    return true;
  }
  bool end_object() { return pop(); }
  bool start_array(std::size_t) { return push_container(JsonTree::Kind::Array); }
  bool end_array() { return pop(); }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
    throw LoadError("parse error at byte " + std::to_string(position) + ": " + ex.what());
  }

  JsonTree take() { return std::move(root_); }

 private:
  bool emplace(JsonTree&& t) {
    if (stack_.empty()) {
      root_ = std::move(t);
      return true;
    }
    attach(std::move(t));
    return true;
  }
  void attach(JsonTree&& t) {
    JsonTree& top = stack_.back();
    if (top.kind == JsonTree::Kind::Object) {
      top.members.emplace_back(std::move(pending_key_), std::move(t));
    } else {
      top.items.push_back(std::move(t));
    }
  }
  // The key under which a container will attach must be captured when the
  // container opens; children consume pending_key_ in the meantime.
  bool push_container(JsonTree::Kind kind) {
    const bool keyed = !stack_.empty() && stack_.back().kind == JsonTree::Kind::Object;
    container_keys_.push_back(keyed ? std::move(pending_key_) : std::string());
    JsonTree t;
    t.kind = kind;
    stack_.push_back(std::move(t));
    return true;
  }
  bool pop() {
    JsonTree done = std::move(stack_.back());
    stack_.pop_back();
    std::string key = std::move(container_keys_.back());
    container_keys_.pop_back();
    if (stack_.empty()) {
      root_ = std::move(done);
    } else if (stack_.back().kind == JsonTree::Kind::Object) {
      stack_.back().members.emplace_back(std::move(key), std::move(done));
    } else {
      stack_.back().items.push_back(std::move(done));
    }
    return true;
  }

  std::vector<JsonTree> stack_;
  std::vector<std::string> container_keys_;
  std::string pending_key_;
  JsonTree root_;
};

}  // namespace detail

/// Parses a JSON document, preserving float lexemes. Throws LoadError with a
/// byte offset on malformed input.
inline JsonTree parse_json_tree(const std::string& document) {
  detail::TreeSax handler;
  nlohmann::json::sax_parse(document, &handler);
  return handler.take();
}

}  // namespace sgg

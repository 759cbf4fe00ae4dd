// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sgg::sldp {

/// Answer-language value: number, string, point, list, set, or dictionary.
/// Equality is tolerance-based, see sldp_equal().
struct SldpValue;
using SldpPtr = std::shared_ptr<SldpValue>;

struct SldpPoint {
  double x = 0, y = 0, z = 0;
};

struct SldpValue {
  enum class Kind { Number, String, Point, List, Set, Dict };
  Kind kind = Kind::Number;
  double number = 0;
  std::string string;
  SldpPoint point;
  std::vector<SldpValue> items;                 // list and set elements
  std::vector<std::pair<std::string, SldpValue>> entries;  // dict, insertion order

  static SldpValue make_number(double n) {
    SldpValue v;
    v.kind = Kind::Number;
    v.number = n;
    return v;
  }
  static SldpValue make_string(std::string s) {
    SldpValue v;
    v.kind = Kind::String;
    v.string = std::move(s);
    return v;
  }
  static SldpValue make_point(double x, double y, double z) {
    SldpValue v;
    v.kind = Kind::Point;
    v.point = {x, y, z};
    return v;
  }
  static SldpValue make_list(std::vector<SldpValue> items) {
    SldpValue v;
    v.kind = Kind::List;
    v.items = std::move(items);
    return v;
  }
  static SldpValue make_set(std::vector<SldpValue> items) {
    SldpValue v;
    v.kind = Kind::Set;
    v.items = std::move(items);
    return v;
  }
  static SldpValue make_dict(std::vector<std::pair<std::string, SldpValue>> entries) {
    SldpValue v;
    v.kind = Kind::Dict;
    v.entries = std::move(entries);
    return v;
  }
};

struct Tolerance {
  double epsilon = 0.01;  // |a - b| <= epsilon for numbers, boundary inclusive
  double delta = 0.01;    // l-infinity distance <= delta for points
};

class SldpParseError : public std::runtime_error {
 public:
  SldpParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class SldpParser {
 public:
  explicit SldpParser(std::string_view text) : text_(text) {}

  SldpValue run() {
    SldpValue v = parse_expression();
    skip_ws();
    if (pos_ != text_.size()) throw SldpParseError("trailing input", pos_);
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    if (pos_ >= text_.size()) throw SldpParseError("unexpected end of input", pos_);
    return text_[pos_];
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  void expect(char c) {
    if (peek() != c)
      throw SldpParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  static bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string parse_name() {
    skip_ws();
    if (pos_ >= text_.size() || !name_start(text_[pos_]))
      throw SldpParseError("expected an identifier", pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double parse_number() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw SldpParseError("expected a number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw SldpParseError("malformed exponent", pos_);
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    return std::stod(std::string(text_.substr(start, pos_ - start)));
  }

  SldpValue parse_expression() {
    char c = peek();
    if (c == '<') return parse_sequence('<', '>', /*is_set=*/true);
    if (c == '[') return parse_sequence('[', ']', /*is_set=*/false);
    if (c == '{') return parse_dict();
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c)))
      return SldpValue::make_number(parse_number());
    if (name_start(c)) {
      std::size_t save = pos_;
      std::string name = parse_name();
      std::string upper = name;
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
      if (upper == "POINT") {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') return parse_point();
        pos_ = save;  // a bare string that happens to be "point"
        return SldpValue::make_string(parse_name());
      }
      return SldpValue::make_string(std::move(name));
    }
    throw SldpParseError("unexpected character", pos_);
  }

  SldpValue parse_point() {
    expect('(');
    double x = parse_number();
    double y = parse_number();
    double z = parse_number();
    expect(')');
    return SldpValue::make_point(x, y, z);
  }

  SldpValue parse_sequence(char open, char close, bool is_set) {
    expect(open);
    std::vector<SldpValue> items;
    if (peek() != close) {
      items.push_back(parse_expression());
      while (peek() == ',') {
        ++pos_;
        items.push_back(parse_expression());
      }
    }
    expect(close);
    return is_set ? SldpValue::make_set(std::move(items))
                  : SldpValue::make_list(std::move(items));
  }

  SldpValue parse_dict() {
    expect('{');
    std::vector<std::pair<std::string, SldpValue>> entries;
    if (peek() != '}') {
      do {
        std::string key = parse_name();
        for (const auto& [existing, _] : entries)
          if (existing == key)
            throw SldpParseError("duplicate dictionary key '" + key + "'", pos_);
        expect(':');
        entries.emplace_back(std::move(key), parse_expression());
      } while (peek() == ',' && (++pos_, true));
    }
    expect('}');
    return SldpValue::make_dict(std::move(entries));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SldpValue parse_sldp(std::string_view text) {
  return detail::SldpParser(text).run();
}

/// Tolerance equality. Mixed kinds are never equal; set equality is mutual
/// inclusion (every element of A matches some element of B and vice versa).
inline bool sldp_equal(const SldpValue& a, const SldpValue& b, const Tolerance& tol = {}) {
  // The boundary is inclusive; the absolute slack keeps values whose decimal
  // difference is exactly the tolerance (e.g. 1.0 vs 1.01) equal despite
  // binary rounding of the operands.
  constexpr double kSlack = 1e-9;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SldpValue::Kind::Number: return std::abs(a.number - b.number) <= tol.epsilon + kSlack;
    case SldpValue::Kind::String: return a.string == b.string;
    case SldpValue::Kind::Point: {
      const double linf = std::max({std::abs(a.point.x - b.point.x),
                                    std::abs(a.point.y - b.point.y),
                                    std::abs(a.point.z - b.point.z)});
      return linf <= tol.delta + kSlack;
    }
    case SldpValue::Kind::List: {
      if (a.items.size() != b.items.size()) return false;
      for (std::size_t i = 0; i < a.items.size(); ++i)
        if (!sldp_equal(a.items[i], b.items[i], tol)) return false;
      return true;
    }
    case SldpValue::Kind::Set: {
      auto included = [&](const std::vector<SldpValue>& xs, const std::vector<SldpValue>& ys) {
        for (const auto& x : xs) {
          bool found = false;
          for (const auto& y : ys)
            if (sldp_equal(x, y, tol)) {
              found = true;
              break;
            }
          if (!found) return false;
        }
        return true;
      };
      return included(a.items, b.items) && included(b.items, a.items);
    }
    case SldpValue::Kind::Dict: {
      if (a.entries.size() != b.entries.size()) return false;
      for (const auto& [key, value] : a.entries) {
        bool found = false;
        for (const auto& [other_key, other_value] : b.entries)
          if (key == other_key) {
            if (!sldp_equal(value, other_value, tol)) return false;
            found = true;
            break;
          }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

inline std::string render_sldp_number(double n) {
  if (n == static_cast<std::int64_t>(n) && std::abs(n) < 1e15)
    return std::to_string(static_cast<std::int64_t>(n));
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), n);
  return std::string(buf, end);
}

/// Canonical text that reparses equal: sets sorted by rendered element,
/// dictionaries sorted by key.
inline std::string render_sldp(const SldpValue& v) {
  switch (v.kind) {
    case SldpValue::Kind::Number: return render_sldp_number(v.number);
    case SldpValue::Kind::String: return v.string;
    case SldpValue::Kind::Point:
      return "POINT(" + render_sldp_number(v.point.x) + " " + render_sldp_number(v.point.y) +
             " " + render_sldp_number(v.point.z) + ")";
    case SldpValue::Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += render_sldp(v.items[i]);
      }
      return out + "]";
    }
    case SldpValue::Kind::Set: {
      std::vector<std::string> parts;
      for (const auto& item : v.items) parts.push_back(render_sldp(item));
      std::sort(parts.begin(), parts.end());
      std::string out = "<";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i];
      }
      return out + ">";
    }
    case SldpValue::Kind::Dict: {
      std::vector<std::pair<std::string, std::string>> parts;
      for (const auto& [key, value] : v.entries) parts.emplace_back(key, render_sldp(value));
      std::sort(parts.begin(), parts.end());
      std::string out = "{";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i].first + ": " + parts[i].second;
      }
      return out + "}";
    }
  }
  return "";
}

}  // namespace sgg::sldp

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sgg::query {

enum class ErrorKind { Parse, UnknownIdentifier, TypeMismatch, UnsupportedFeature, DepthExceeded };

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::UnknownIdentifier: return "unknown-identifier";
    case ErrorKind::TypeMismatch: return "type-mismatch";
    case ErrorKind::UnsupportedFeature: return "unsupported-feature";
    case ErrorKind::DepthExceeded: return "depth-exceeded";
  }
  return "?";
}

/// Query failure. The message is self-contained so it can be fed back to an
/// LLM for self-correction.
struct QueryError {
  ErrorKind kind = ErrorKind::Parse;
  std::string message;
  int line = 0;    // 1-based, parse errors only
  int column = 0;  // 1-based, parse errors only

  std::string to_string() const {
    std::string out = std::string(error_kind_name(kind)) + " error";
    if (line > 0) out += " at line " + std::to_string(line) + ", column " + std::to_string(column);
    out += ": " + message;
    return out;
  }
};

enum class TokenKind {
  Identifier,
  Keyword,  // normalized to upper case
  Integer,
  Float,
  String,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Dot,
  DotDot,
  Colon,
  Pipe,
  Star,
  Plus,
  Minus,
  Slash,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Arrow,      // ->
  LeftArrow,  // <-
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier/keyword/string content, number lexeme
  std::int64_t int_value = 0;
  double float_value = 0.0;
  int line = 1;
  int column = 1;
};

namespace detail {

inline const char* kKeywords[] = {
    "MATCH",  "WHERE",    "RETURN", "WITH",   "AS",     "DISTINCT", "ORDER",  "BY",
    "ASC",    "DESC",     "SKIP",   "LIMIT",  "SET",    "AND",      "OR",     "NOT",
    "IN",     "CONTAINS", "TRUE",   "FALSE",  "NULL",
    // Recognized so the parser can point at them as unsupported constructs.
    "CREATE", "DELETE",   "MERGE",  "UNWIND", "OPTIONAL", "CALL",   "UNION",  "REMOVE",
    "DETACH", "FOREACH",  "CASE",   "EXISTS", "STARTS",   "ENDS",   "XOR",    "IS",
};

inline std::optional<std::string> keyword_of(const std::string& word) {
  std::string upper;
  upper.reserve(word.size());
  for (char c : word) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const char* k : kKeywords)
    if (upper == k) return upper;
  return std::nullopt;
}

}  // namespace detail

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) {}

  /// Tokenizes the whole input. Returns false and fills `error` on a lexical
  /// problem.
  bool run(std::vector<Token>& out, QueryError& error) {
    while (true) {
      skip_whitespace();
      if (pos_ >= text_.size()) break;
      Token tok;
      tok.line = line_;
      tok.column = column_;
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word = read_word();
        if (auto kw = detail::keyword_of(word)) {
          tok.kind = TokenKind::Keyword;
          tok.text = *kw;
        } else {
          tok.kind = TokenKind::Identifier;
          tok.text = word;
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        if (!read_number(tok, error)) return false;
      } else if (c == '\'' || c == '"') {
        if (!read_string(tok, error)) return false;
      } else {
        if (!read_punct(tok, error)) return false;
      }
      out.push_back(std::move(tok));
    }
    Token end;
    end.kind = TokenKind::End;
    end.line = line_;
    end.column = column_;
    out.push_back(end);
    return true;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_whitespace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  std::string read_word() {
    std::string word;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
      word += c;
      advance();
    }
    return word;
  }

  bool read_number(Token& tok, QueryError& error) {
    std::string lexeme;
    bool is_float = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      lexeme += text_[pos_];
      advance();
    }
    // Do not consume '..' (range punctuation) as a decimal point.
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      is_float = true;
      lexeme += '.';
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        lexeme += text_[pos_];
        advance();
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      is_float = true;
      lexeme += text_[pos_];
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        lexeme += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        error = {ErrorKind::Parse, "malformed number '" + lexeme + "'", tok.line, tok.column};
        return false;
      }
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        lexeme += text_[pos_];
        advance();
      }
    }
    tok.text = lexeme;
    if (is_float) {
      tok.kind = TokenKind::Float;
      tok.float_value = std::stod(lexeme);
    } else {
      tok.kind = TokenKind::Integer;
      tok.int_value = std::stoll(lexeme);
    }
    return true;
  }

  bool read_string(Token& tok, QueryError& error) {
    const char quote = text_[pos_];
    advance();
    std::string content;
    while (pos_ < text_.size() && text_[pos_] != quote) {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        advance();
        content += text_[pos_];
        advance();
        continue;
      }
      content += text_[pos_];
      advance();
    }
    if (pos_ >= text_.size()) {
      error = {ErrorKind::Parse, "unterminated string literal", tok.line, tok.column};
      return false;
    }
    advance();  // closing quote
    tok.kind = TokenKind::String;
    tok.text = content;
    return true;
  }

  bool read_punct(Token& tok, QueryError& error) {
    const char c = text_[pos_];
    auto two = [this](char a, char b) {
      return text_[pos_] == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    auto take = [this, &tok](TokenKind kind, int n) {
      tok.kind = kind;
      for (int i = 0; i < n; ++i) advance();
      return true;
    };
    if (two('<', '>')) return take(TokenKind::Ne, 2);
    if (two('<', '=')) return take(TokenKind::Le, 2);
    if (two('<', '-')) return take(TokenKind::LeftArrow, 2);
    if (two('>', '=')) return take(TokenKind::Ge, 2);
    if (two('-', '>')) return take(TokenKind::Arrow, 2);
    if (two('.', '.')) return take(TokenKind::DotDot, 2);
    switch (c) {
      case '(': return take(TokenKind::LParen, 1);
      case ')': return take(TokenKind::RParen, 1);
      case '[': return take(TokenKind::LBracket, 1);
      case ']': return take(TokenKind::RBracket, 1);
      case '{': return take(TokenKind::LBrace, 1);
      case '}': return take(TokenKind::RBrace, 1);
      case ',': return take(TokenKind::Comma, 1);
      case '.': return take(TokenKind::Dot, 1);
      case ':': return take(TokenKind::Colon, 1);
      case '|': return take(TokenKind::Pipe, 1);
      case '*': return take(TokenKind::Star, 1);
      case '+': return take(TokenKind::Plus, 1);
      case '-': return take(TokenKind::Minus, 1);
      case '/': return take(TokenKind::Slash, 1);
      case '=': return take(TokenKind::Eq, 1);
      case '<': return take(TokenKind::Lt, 1);
      case '>': return take(TokenKind::Gt, 1);
      default:
        error = {ErrorKind::Parse, std::string("unexpected character '") + c + "'", line_,
                 column_};
        return false;
    }
  }

  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace sgg::query

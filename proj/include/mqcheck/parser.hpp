// Copyright 2026 The mqcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Readers and writers for the two model formats.
//
// Abstract format, one process per line:
//
//   #abstract
//   P0: ab
//   P1: bc
//   ca            <- bare line, takes the next implicit rank
//
// DSL format:
//
//   process 0 { send tag=1 to 2; send tag=2 to 1; }
//   process 1 { recv tag=2 from 0; send tag=3 to 2 comm=0; }

#ifndef MQCHECK_PARSER_HPP
#define MQCHECK_PARSER_HPP

#include <cctype>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mqcheck/model.hpp"
#include "mqcheck/utf8.hpp"

namespace mqcheck {

class ParseError : public std::runtime_error {
 public:
  enum class Category : std::uint8_t { Syntax, SelfMessage, DuplicateProcess, BadInteger };

  ParseError(Category category, std::uint32_t line, std::uint32_t column,
             const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        category_(category),
        line_(line),
        column_(column),
        message_(message) {}

  Category category() const { return category_; }
  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  Category category_;
  std::uint32_t line_;
  std::uint32_t column_;
  std::string message_;
};

namespace detail {

struct Line {
  std::string_view text;
  std::uint32_t number;
};

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::uint32_t n = 1;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back({line, n++});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

inline std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && utf8::is_space(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// Parses an unsigned decimal that must occupy all of `digits`.
inline std::optional<std::uint32_t> to_u32(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Abstract format

inline Model parse_abstract(std::string_view text) {
  using Cat = ParseError::Category;
  Model model(Mode::Abstract);
  Rank next_implicit = 0;
  bool seen_content = false;

  for (const auto& [line, lineno] : detail::split_lines(text)) {
    std::size_t i = detail::skip_space(line, 0);
    if (i == line.size()) continue;

    std::string_view rest = line.substr(i);
    if (!seen_content) {
      seen_content = true;
      std::string_view trimmed = rest;
      while (!trimmed.empty() && utf8::is_space(static_cast<unsigned char>(trimmed.back()))) {
        trimmed.remove_suffix(1);
      }
      if (trimmed == "#abstract") continue;
    }

    // "P<rank>:" prefix. The label runs from 'P' to the first ':' and must
    // not contain whitespace; anything else is a bare line.
    Rank rank;
    std::size_t body = i;
    bool explicit_rank = false;
    if (rest.size() > 1 && rest[0] == 'P') {
      auto colon = rest.find(':');
      if (colon != std::string_view::npos && colon > 1) {
        auto label = rest.substr(1, colon - 1);
        bool spaced = false;
        for (char c : label) spaced |= utf8::is_space(static_cast<unsigned char>(c));
        if (!spaced) {
          auto v = detail::to_u32(label);
          if (!v) {
            throw ParseError(Cat::BadInteger, lineno, static_cast<std::uint32_t>(i + 2),
                             "malformed process rank '" + std::string(label) + "'");
          }
          rank = *v;
          body = i + colon + 1;
          explicit_rank = true;
        }
      }
    }
    if (!explicit_rank) rank = next_implicit++;

    if (model.has_rank(rank)) {
      throw ParseError(Cat::DuplicateProcess, lineno, static_cast<std::uint32_t>(i + 1),
                       "duplicate process " + std::to_string(rank));
    }
    std::vector<MessageOccurrence> occs;
    std::size_t pos = body;
    while (pos < line.size()) {
      const std::size_t start = pos;
      auto cp = utf8::decode(line, pos);
      if (!cp) {
        throw ParseError(Cat::Syntax, lineno, static_cast<std::uint32_t>(start + 1),
                         "invalid UTF-8");
      }
      if (utf8::is_space(*cp)) continue;
      MessageOccurrence o = MessageOccurrence::abstract(model.signatures().intern_character(*cp));
      o.where = {lineno, static_cast<std::uint32_t>(start + 1)};
      occs.push_back(o);
    }
    model.add_sequence(rank).occurrences = std::move(occs);
  }
  return model;
}

// ---------------------------------------------------------------------------
// DSL

namespace detail {

struct Token {
  enum class Kind : std::uint8_t { Word, Number, Symbol, End };
  Kind kind;
  std::string_view text;
  std::uint32_t line;
  std::uint32_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    using Cat = ParseError::Category;
    skip();
    if (pos_ >= src_.size()) return {Token::Kind::End, {}, line_, col()};
    const std::size_t start = pos_;
    const std::uint32_t line = line_, column = col();
    const char c = src_[pos_];
    auto is_word = [](char ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
    };
    if (is_digit(c)) {
      while (pos_ < src_.size() && (is_digit(src_[pos_]) || is_word(src_[pos_]))) ++pos_;
      auto text = src_.substr(start, pos_ - start);
      if (!to_u32(text)) {
        throw ParseError(Cat::BadInteger, line, column,
                         "malformed integer '" + std::string(text) + "'");
      }
      return {Token::Kind::Number, text, line, column};
    }
    if (is_word(c)) {
      while (pos_ < src_.size() && (is_word(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      return {Token::Kind::Word, src_.substr(start, pos_ - start), line, column};
    }
    if (c == '{' || c == '}' || c == '=' || c == ';') {
      ++pos_;
      return {Token::Kind::Symbol, src_.substr(start, 1), line, column};
    }
    if (c == '-' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1])) {
      throw ParseError(Cat::BadInteger, line, column, "negative integers are not allowed");
    }
    std::size_t p = pos_;
    auto cp = utf8::decode(src_, p);
    std::string shown = cp ? utf8::encode(*cp) : std::string("\\x?");
    throw ParseError(Cat::Syntax, line, column, "unexpected character '" + shown + "'");
  }

 private:
  void skip() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (utf8::is_space(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint32_t col() const { return static_cast<std::uint32_t>(pos_ - line_start_ + 1); }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  std::uint32_t line_ = 1;
};

class DslParser {
 public:
  explicit DslParser(std::string_view src) : lex_(src) { advance(); }

  Model parse() {
    Model model(Mode::Strict);
    while (tok_.kind != Token::Kind::End) process_block(model);
    return model;
  }

 private:
  using Cat = ParseError::Category;

  void advance() { tok_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = tok_.kind == Token::Kind::End ? "end of input"
                                                    : "'" + std::string(tok_.text) + "'";
    throw ParseError(Cat::Syntax, tok_.line, tok_.column,
                     "expected " + expected + ", got " + got);
  }

  void expect_word(std::string_view w) {
    if (tok_.kind != Token::Kind::Word || tok_.text != w) fail("'" + std::string(w) + "'");
    advance();
  }

  void expect_symbol(char c) {
    if (tok_.kind != Token::Kind::Symbol || tok_.text[0] != c) fail(std::string("'") + c + "'");
    advance();
  }

  Token expect_number() {
    if (tok_.kind != Token::Kind::Number) fail("integer");
    Token t = tok_;
    advance();
    return t;
  }

  static std::uint32_t value(const Token& t) { return *to_u32(t.text); }

  void process_block(Model& model) {
    expect_word("process");
    Token rank_tok = expect_number();
    const Rank rank = value(rank_tok);
    if (model.has_rank(rank)) {
      throw ParseError(Cat::DuplicateProcess, rank_tok.line, rank_tok.column,
                       "duplicate process " + std::to_string(rank));
    }
    expect_symbol('{');
    std::vector<MessageOccurrence> occs;
    while (!(tok_.kind == Token::Kind::Symbol && tok_.text == "}")) {
      occs.push_back(statement(model, rank));
    }
    advance();
    model.add_sequence(rank).occurrences = std::move(occs);
  }

  MessageOccurrence statement(Model& model, Rank self) {
    const Token head = tok_;
    Role role;
    if (head.kind == Token::Kind::Word && head.text == "send") {
      role = Role::Send;
    } else if (head.kind == Token::Kind::Word && head.text == "recv") {
      role = Role::Recv;
    } else {
      fail("'send', 'recv' or '}'");
    }
    advance();
    expect_word("tag");
    expect_symbol('=');
    const std::uint32_t tag = value(expect_number());
    expect_word(role == Role::Send ? "to" : "from");
    const Token peer_tok = expect_number();
    const Rank peer = value(peer_tok);
    std::uint32_t comm = 0;
    if (tok_.kind == Token::Kind::Word && tok_.text == "comm") {
      advance();
      expect_symbol('=');
      comm = value(expect_number());
    }
    expect_symbol(';');

    if (peer == self) {
      throw ParseError(Cat::SelfMessage, peer_tok.line, peer_tok.column,
                       std::string("process ") + std::to_string(self) +
                           (role == Role::Send ? " sends to itself" : " receives from itself"));
    }
    Envelope env = role == Role::Send ? Envelope{tag, self, peer, comm}
                                      : Envelope{tag, peer, self, comm};
    MessageOccurrence o;
    o.signature = model.signatures().set_signature_for(env);
    o.role = role;
    o.envelope = env;
    o.where = {head.line, head.column};
    return o;
  }

  Lexer lex_;
  Token tok_{};
};

}  // namespace detail

inline Model parse_dsl(std::string_view text) { return detail::DslParser(text).parse(); }

/// True when the first non-blank token is `process`. Comment lines other than
/// the `#abstract` header are skipped.
inline bool looks_like_dsl(std::string_view text) {
  for (const auto& [line, n] : detail::split_lines(text)) {
    std::size_t i = detail::skip_space(line, 0);
    if (i == line.size()) continue;
    auto rest = line.substr(i);
    if (rest.starts_with("#abstract")) return false;
    if (rest[0] == '#') continue;
    if (!rest.starts_with("process")) return false;
    return rest.size() == 7 || !(std::isalnum(static_cast<unsigned char>(rest[7])) || rest[7] == '_');
  }
  return false;
}

inline Model parse_auto(std::string_view text) {
  return looks_like_dsl(text) ? parse_dsl(text) : parse_abstract(text);
}

// ---------------------------------------------------------------------------
// Writers

/// Code point used for signature `index` when writing a model whose
/// signatures carry no character of their own: a-z, A-Z, 0-9, then
/// U+0100 upwards skipping surrogates.
inline char32_t placeholder_character(std::size_t index) {
  static constexpr std::string_view kAscii =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  if (index < kAscii.size()) return static_cast<char32_t>(kAscii[index]);
  std::size_t cp = 0x100 + (index - kAscii.size());
  if (cp >= 0xD800) cp += 0x800;
  if (cp > 0x10FFFF) throw std::length_error("too many signatures for the abstract format");
  return static_cast<char32_t>(cp);
}

inline std::string render_abstract(const Model& model) {
  const auto& space = model.signatures();
  std::string out = "#abstract\n";
  for (const auto& s : model.sequences()) {
    out += 'P';
    out += std::to_string(s.rank);
    out += ':';
    if (!s.occurrences.empty()) out += ' ';
    for (const auto& o : s.occurrences) {
      auto ch = space.character_of(o.signature);
      utf8::append(out, ch ? *ch : placeholder_character(o.signature.value()));
    }
    out += '\n';
  }
  return out;
}

/// Requires every occurrence to carry an envelope and a role.
inline std::string render_dsl(const Model& model) {
  std::ostringstream os;
  for (const auto& s : model.sequences()) {
    os << "process " << s.rank << " {\n";
    for (const auto& o : s.occurrences) {
      if (!o.envelope) throw UsageError("render_dsl: occurrence without envelope");
      const Envelope& e = *o.envelope;
      Role role = o.role;
      if (role == Role::Unspecified) role = s.rank == e.source ? Role::Send : Role::Recv;
      if (role == Role::Send) {
        os << "  send tag=" << e.tag << " to " << e.destination;
      } else {
        os << "  recv tag=" << e.tag << " from " << e.source;
      }
      if (e.communicator != 0) os << " comm=" << e.communicator;
      os << ";\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace mqcheck

#endif  // MQCHECK_PARSER_HPP

#include "hbl/loop_parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace hbl {

LoopParseError::LoopParseError(Kind kind, std::size_t line, std::size_t column,
                               const std::string& message)
    : DocumentError(std::to_string(line) + ":" + std::to_string(column) + ": " +
                    std::string(toString(kind)) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string_view toString(LoopParseError::Kind kind) {
  switch (kind) {
    case LoopParseError::Kind::SyntaxError: return "syntax error";
    case LoopParseError::Kind::NonlinearSubscript: return "nonlinear subscript";
    case LoopParseError::Kind::UnknownIndex: return "unknown index";
    case LoopParseError::Kind::DuplicateArray: return "duplicate array";
    case LoopParseError::Kind::DuplicateIndex: return "duplicate index";
  }
  return "error";
}

namespace {

using Kind = LoopParseError::Kind;

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipBlankAndComments();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const unsigned char c = src_[pos_];
      if (std::isalpha(c) || c == '_') {
        t.type = Tok::Ident;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += src_[pos_];
          advance(1);
        }
      } else if (std::isdigit(c)) {
        t.type = Tok::Number;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          t.text += src_[pos_];
          advance(1);
        }
      } else if (src_.substr(pos_, 3) == "\xE2\x88\x92") {  // U+2212 MINUS SIGN
        t.type = Tok::Punct;
        t.text = "-";
        pos_ += 3;
        ++column_;
      } else if (std::string_view("(){}[],;+-*").find(static_cast<char>(c)) != std::string_view::npos) {
        t.type = Tok::Punct;
        t.text = std::string(1, static_cast<char>(c));
        advance(1);
      } else {
        throw LoopParseError(Kind::SyntaxError, line_, column_,
                             "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++column_;
      }
      ++pos_;
    }
  }

  void skipBlankAndComments() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance(1);
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ProblemDocument run() {
    expectIdent("loop");
    expect("(");
    std::vector<std::string> indices;
    do {
      const Token& t = peek();
      if (t.type != Tok::Ident) fail(t, "expected an index name");
      if (index_.count(t.text)) {
        throw LoopParseError(Kind::DuplicateIndex, t.line, t.column, "index '" + t.text + "' repeated");
      }
      index_[t.text] = indices.size();
      indices.push_back(t.text);
      next();
    } while (accept(","));
    expect(")");
    expect("{");

    ProblemDocument doc;
    doc.dimension = indices.size();
    doc.indices = indices;
    std::set<std::string> arrays;
    while (!check("}")) {
      const Token name = peek();
      if (name.type != Tok::Ident) fail(name, "expected an array access or '}'");
      next();
      if (!arrays.insert(name.text).second) {
        throw LoopParseError(Kind::DuplicateArray, name.line, name.column,
                             "array '" + name.text + "' accessed twice");
      }
      ArrayAccess access;
      access.name = name.text;
      expect("[");
      do {
        access.rows.push_back(expression());
      } while (accept(","));
      expect("]");
      expect(";");
      doc.arrays.push_back(std::move(access));
    }
    expect("}");
    if (peek().type != Tok::End) fail(peek(), "unexpected text after the loop body");
    if (doc.arrays.empty()) fail(peek(), "loop body has no array accesses");
    return doc;
  }

 private:
  // expr := ['+'|'-'] term (('+'|'-') term)*
  std::vector<Integer> expression() {
    std::vector<Integer> row(index_.size(), Integer(0));
    bool first = true;
    for (;;) {
      int sign = 1;
      if (accept("-")) {
        sign = -1;
      } else if (!accept("+") && !first) {
        break;
      }
      term(row, sign);
      first = false;
      if (!check("+") && !check("-")) break;
    }
    return row;
  }

  // term := NUMBER ['*'] IDENT | IDENT ['*' NUMBER]
  void term(std::vector<Integer>& row, int sign) {
    const Token start = peek();
    Integer coeff = sign;
    if (start.type == Tok::Number) {
      coeff *= Integer(start.text);
      next();
      accept("*");
      if (peek().type != Tok::Ident) {
        throw LoopParseError(Kind::NonlinearSubscript, start.line, start.column,
                             "constant offset '" + start.text + "' in subscript");
      }
    }
    const Token id = peek();
    if (id.type != Tok::Ident) fail(id, "expected an index or coefficient");
    next();
    auto it = index_.find(id.text);
    if (it == index_.end()) {
      throw LoopParseError(Kind::UnknownIndex, id.line, id.column,
                           "'" + id.text + "' is not a loop index");
    }
    if (accept("*")) {
      const Token rhs = peek();
      if (rhs.type == Tok::Ident) {
        throw LoopParseError(Kind::NonlinearSubscript, rhs.line, rhs.column,
                             "product of indices '" + id.text + "*" + rhs.text + "'");
      }
      if (rhs.type != Tok::Number) fail(rhs, "expected a coefficient after '*'");
      coeff *= Integer(rhs.text);
      next();
    }
    if (peek().type == Tok::Ident || peek().type == Tok::Number) {
      fail(peek(), "expected '+', '-', ',' or ']'");
    }
    row[it->second] += coeff;
  }

  const Token& peek() const { return toks_[pos_]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  bool check(std::string_view p) const { return peek().type == Tok::Punct && peek().text == p; }
  bool accept(std::string_view p) {
    if (!check(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail(peek(), "expected '" + std::string(p) + "'");
  }
  void expectIdent(std::string_view word) {
    if (peek().type != Tok::Ident || peek().text != word) fail(peek(), "expected '" + std::string(word) + "'");
    next();
  }
  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    std::string got = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
    throw LoopParseError(Kind::SyntaxError, t.line, t.column, message + ", got " + got);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> index_;
};

}  // namespace

ProblemDocument parseLoopNest(std::string_view text) {
  ProblemDocument doc = Parser(Lexer(text).run()).run();
  doc.validate();
  return doc;
}

}  // namespace hbl

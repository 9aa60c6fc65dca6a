// Tokenizer shared by the formula, sequent and lexicon parsers.

#ifndef MILL1_SRC_LEXER_HPP
#define MILL1_SRC_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mill1/errors.hpp"

namespace mill1::detail {

struct Token {
  enum class Type { Ident, Int, Symbol, End };
  Type type = Type::End;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(std::string_view sym) const { return type == Type::Symbol && text == sym; }
  bool is_ident() const { return type == Type::Ident; }
  // Capitalized identifiers and ?names are variables.
  bool is_var_name() const {
    return type == Type::Ident && !text.empty() &&
           (text[0] == '?' || (text[0] >= 'A' && text[0] <= 'Z') || text[0] == '_');
  }
};

class Lexer {
 public:
  explicit Lexer(std::string_view text, int first_line = 1) {
    tokenize(text, first_line);
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().type == Token::Type::End; }
  bool accept(std::string_view sym) {
    if (peek().is(sym)) {
      next();
      return true;
    }
    return false;
  }
  Token expect(std::string_view sym) {
    if (!peek().is(sym)) fail("expected '" + std::string(sym) + "'");
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.line, t.column);
  }

 private:
  void tokenize(std::string_view s, int line) {
    int col = 1;
    std::size_t i = 0;
    auto push = [&](Token::Type type, std::string text, int l, int c) {
      tokens_.push_back(Token{type, std::move(text), l, c});
    };
    auto ident_char = [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
             c == '_' || c == '\'';
    };
    while (i < s.size()) {
      char c = s[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        ++col;
        continue;
      }
      if (c == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
        continue;
      }
      const int start_col = col;
      if (c >= '0' && c <= '9') {
        std::size_t j = i;
        while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
        push(Token::Type::Int, std::string(s.substr(i, j - i)), line, start_col);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      if (c == '?' || c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
        std::size_t j = i + 1;
        while (j < s.size() && ident_char(s[j])) ++j;
        std::string text(s.substr(i, j - i));
        if (text == "?") throw ParseError("empty variable name", line, start_col);
        if (text == "o" && j < s.size() && (s[j] == '>' || s[j] == '<')) {
          push(Token::Type::Symbol, text + s[j], line, start_col);
          col += 2;
          i = j + 1;
          continue;
        }
        push(Token::Type::Ident, std::move(text), line, start_col);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      static const char* const two[] = {"-o", "|-", "^>", "^<", "!>", "!<", "::", ":-"};
      bool matched = false;
      for (const char* op : two) {
        if (s.substr(i, 2) == op) {
          push(Token::Type::Symbol, op, line, start_col);
          i += 2;
          col += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      static const std::string_view one = "()[],.*\\/^!";
      if (one.find(c) != std::string_view::npos) {
        push(Token::Type::Symbol, std::string(1, c), line, start_col);
        ++i;
        ++col;
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line, start_col);
    }
    push(Token::Type::End, "", line, col);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace mill1::detail

#endif  // MILL1_SRC_LEXER_HPP

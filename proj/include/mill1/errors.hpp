// Exception types shared by the library and the command line tool.

#ifndef MILL1_ERRORS_HPP
#define MILL1_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mill1 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A subformula whose sort comes out negative.
class SortError : public Error {
 public:
  explicit SortError(const std::string& subformula)
      : Error("negative sort for subformula " + subformula), subformula_(subformula) {}
  const std::string& subformula() const { return subformula_; }

 private:
  std::string subformula_;
};

class TranslateError : public Error {
 public:
  enum class Kind { ArityMismatch, UnsupportedConnective, IdentityConstraint };
  TranslateError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(unsigned long long budget)
      : Error("search budget of " + std::to_string(budget) + " expansions exhausted"),
        budget_(budget) {}
  unsigned long long budget() const { return budget_; }

 private:
  unsigned long long budget_;
};

// Unknown words, malformed or rejected lexical entries.
class LexiconError : public Error {
 public:
  using Error::Error;
};

}  // namespace mill1

#endif  // MILL1_ERRORS_HPP

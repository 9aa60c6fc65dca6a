// Lexicons and parsing sentences as proof search.
//
// Lexicon files are line based:
//
//   base 0                       position of the first word (default 1)
//   sort inf 1                   sort of an atomic D formula (default 0)
//   features np 1                number of feature arguments of an atom
//   John :: np                   D entry, translated at the word's span
//   zag :- forall X. ... s(X,R)  MILL1 schema; L and R name the word's span
//
// `#` starts a comment.

#ifndef MILL1_GRAMMAR_HPP
#define MILL1_GRAMMAR_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mill1/formula.hpp"
#include "mill1/proofnet.hpp"
#include "mill1/prover.hpp"
#include "mill1/semantics.hpp"

namespace mill1 {

struct LexEntry {
  enum class Kind { D, Schema };
  Kind kind = Kind::D;
  DFormula d;
  MillFormula schema;
  Term left;   // span variables of a schema
  Term right;
  std::string text;
  int line = 0;
  std::vector<std::string> warnings;  // simplicity lint

  bool simple() const { return warnings.empty(); }
};

struct Lexicon {
  int base = 1;
  AtomSortTable sorts;
  std::map<std::string, int> feature_arity;
  std::map<std::string, std::vector<LexEntry>> entries;
  std::vector<std::string> warnings;

  const std::vector<LexEntry>* lookup(const std::string& word) const;
  int features_of(const std::string& atom) const;
};

// Throws ParseError for malformed lines and LexiconError for sort or
// feature problems.
Lexicon parse_lexicon(std::string_view text);
Lexicon load_lexicon(const std::string& path);

// Warnings for connectives outside the simple fragment.
std::vector<std::string> simplicity_lint(const DFormula& f);

struct Sentence {
  std::vector<std::string> words;
  int base = 1;

  int first() const { return base; }
  int last() const { return base + static_cast<int>(words.size()); }
};

Sentence make_sentence(std::string_view text, int base);

// Entry translated at span [l, r], closed over its feature variables.
MillFormula lexical_formula(const Lexicon& lex, const LexEntry& e, int l, int r);
// Goal D formula over the whole sentence; missing features become fresh
// variables.
MillFormula goal_formula(const Lexicon& lex, std::string_view goal, int first, int last);

struct LexicalSequent {
  Sequent sequent;
  std::vector<int> choice;         // entry index per word
  std::vector<std::string> names;  // lexical constant per word
};

// One sequent per combination of entries, in declaration order.
class SequentEnumerator {
 public:
  // Throws LexiconError for an unknown word.
  SequentEnumerator(const Lexicon& lex, Sentence s, std::string goal);
  std::optional<LexicalSequent> next();
  std::size_t combinations() const;

 private:
  const Lexicon& lex_;
  Sentence sentence_;
  std::string goal_;
  std::vector<const std::vector<LexEntry>*> entries_;
  std::vector<int> odometer_;
  bool done_ = false;
};

struct ParseOptions {
  std::size_t limit = 0;
  bool allow_nonsimple = false;
  bool extract_terms = true;
  ProveOptions prove;
};

struct Reading {
  LexicalSequent lexical;
  ProofStructure net;
  std::optional<LambdaTerm> term;
  std::optional<MillFormula> term_type;
  std::string term_error;
};

struct ParseResult {
  std::vector<Reading> readings;
  std::size_t sequents = 0;
  SearchStats stats;
};

// Throws LexiconError for unknown words, or for lint-flagged entries unless
// allow_nonsimple is set.
ParseResult parse(const Lexicon& lex, const Sentence& s, const std::string& goal,
                  const ParseOptions& opts = {});

}  // namespace mill1

#endif  // MILL1_GRAMMAR_HPP

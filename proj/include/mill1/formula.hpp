// Formula trees for first-order multiplicative intuitionistic linear logic
// and for the Displacement calculus, with their ASCII syntax.
//
// MILL1 syntax:   forall X Y. A     exists X. A     A -o B     A * B
//                 p(t1,...,tn)      ( A )
// D syntax:       A * B   A \ B   A / B   A o> B   A ^> B   A !> B
//                 A o< B  A ^< B  A !< B   I   J
//                 check(A) hat(A) rproj(A) rinj(A) lproj(A) linj(A)
// In D, `*` `o>` `o<` bind loosest (left associative), `\` `!>` `!<` are
// right associative, `/` `^>` `^<` bind tightest (left associative). The
// undirected `o`, `^`, `!` are read as the `>` variants.

#ifndef MILL1_FORMULA_HPP
#define MILL1_FORMULA_HPP

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mill1/term.hpp"

namespace mill1 {

enum class Polarity { Positive, Negative };

inline Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}
inline char polarity_sign(Polarity p) { return p == Polarity::Positive ? '+' : '-'; }

class MillFormula {
 public:
  enum class Kind { Atom, Tensor, Lolli, Forall, Exists };
  struct Node;

  MillFormula();  // nullary atom "?"

  static MillFormula atom(std::string pred, std::vector<Term> args = {});
  static MillFormula tensor(MillFormula left, MillFormula right);
  static MillFormula lolli(MillFormula antecedent, MillFormula consequent);
  static MillFormula forall(Term var, MillFormula body);
  static MillFormula exists(Term var, MillFormula body);
  static MillFormula quantifier(Kind kind, Term var, MillFormula body);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_quantifier() const { return kind() == Kind::Forall || kind() == Kind::Exists; }

  const std::string& pred() const;
  std::span<const Term> args() const;
  // Tensor: the two factors. Lolli: antecedent and consequent.
  const MillFormula& left() const;
  const MillFormula& right() const;
  // Quantifiers.
  const Term& var() const;
  const MillFormula& body() const;

  // Reparseable ASCII text. Variable names are derived from hints and made
  // unique within the formula.
  std::string str() const;
  std::string unicode() const;

  friend bool operator==(const MillFormula& a, const MillFormula& b);
  friend bool operator!=(const MillFormula& a, const MillFormula& b) { return !(a == b); }

 private:
  explicit MillFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::set<VarId> free_vars(const MillFormula& f);
std::map<VarId, Term> free_var_terms(const MillFormula& f);
// Rigid variables among the free variables, after applying s.
std::set<VarId> free_rigid_vars(const MillFormula& f, const Substitution& s);
std::vector<VarId> binder_ids(const MillFormula& f);

// Applies s to free occurrences only.
MillFormula substitute(const MillFormula& f, const Substitution& s);
// Replaces the free occurrences of v by t.
MillFormula instantiate(const MillFormula& f, VarId v, const Term& t);
// Bound variables may differ; free variables must be identical.
bool alpha_equivalent(const MillFormula& a, const MillFormula& b);
// Equal up to a consistent bijective renaming of all variables.
bool variant(const MillFormula& a, const MillFormula& b);

// Variables that are free in the text are looked up in, and added to, env.
MillFormula parse_mill(std::string_view text, std::map<std::string, Term>* env = nullptr);

// Assigns readable, unique names to variables. Flexible variables get a
// capitalized name, rigid ones a lowercase name. One instance shared across
// several printed objects keeps their names consistent.
class VarNames {
 public:
  std::string name(const Term& var);
  std::string term(const Term& t);
  std::string formula(const MillFormula& f, bool unicode = false);

 private:
  std::map<VarId, std::string> names_;
  std::set<std::string> used_;
};

class DFormula {
 public:
  enum class Kind {
    Atom,
    Bullet, Under, Over,
    OdotGt, UpGt, DownGt,
    OdotLt, UpLt, DownLt,
    UnitI, UnitJ,
    Check, Hat, RProj, RInj, LProj, LInj
  };
  struct Node;

  DFormula();  // atom "?"

  static DFormula atom(std::string name, std::vector<Term> features = {});
  // Under: left is the argument A of A\C. Over: right is the argument B of C/B.
  // Wraps: A o B, C ^ B, A ! C in the order written.
  static DFormula binary(Kind kind, DFormula left, DFormula right);
  static DFormula unary(Kind kind, DFormula arg);
  static DFormula unit_i();
  static DFormula unit_j();

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_binary() const;
  bool is_unary() const;
  const std::string& name() const;
  std::span<const Term> features() const;
  const DFormula& left() const;
  const DFormula& right() const;
  const DFormula& arg() const { return left(); }

  std::string str() const;
  std::string unicode() const;

  friend bool operator==(const DFormula& a, const DFormula& b);
  friend bool operator!=(const DFormula& a, const DFormula& b) { return !(a == b); }

 private:
  explicit DFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class AtomSortTable {
 public:
  void set(const std::string& atom, int sort) { sorts_[atom] = sort; }
  int sort_of(const std::string& atom) const;
  bool declared(const std::string& atom) const { return sorts_.count(atom) != 0; }
  const std::map<std::string, int>& entries() const { return sorts_; }

 private:
  std::map<std::string, int> sorts_;
};

// Throws SortError naming the first subformula whose sort is negative.
int sort(const DFormula& f, const AtomSortTable& st);
int position_arity(const DFormula& f, const AtomSortTable& st);

DFormula parse_d(std::string_view text, std::map<std::string, Term>* env = nullptr);

struct Sequent {
  std::vector<MillFormula> antecedent;
  MillFormula succedent;
};

// "A, B |- C". Free variables are shared across the whole sequent.
Sequent parse_sequent(std::string_view text);
std::string sequent_str(const Sequent& s);

}  // namespace mill1

#endif  // MILL1_FORMULA_HPP

// Reading off a natural deduction proof, and its linear lambda term, from a
// cut-free proof net. Quantifiers and atom arguments are dropped first, so
// the result lives in the multiplicative fragment.

#ifndef MILL1_SEMANTICS_HPP
#define MILL1_SEMANTICS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mill1/formula.hpp"
#include "mill1/proofnet.hpp"

namespace mill1 {

struct NDProof {
  enum class Rule { Hyp, LolliI, LolliE, TensorI, TensorE };
  Rule rule = Rule::Hyp;
  MillFormula formula;  // quantifier-free conclusion
  // Hyp: hypothesis index. LolliI: discharged index. TensorE: first of the
  // two discharged indices (the second is hyp + 1).
  int hyp = -1;
  std::vector<NDProof> premisses;

  std::size_t size() const;
};

// Antecedent i of the sequent is hypothesis i; discharged hypotheses are
// numbered after them. Throws std::logic_error if the structure is not a net.
NDProof sequentialize(const ProofStructure& net);

class LambdaTerm {
 public:
  enum class Kind { Var, Const, App, Lam, Pair, LetPair };
  struct Node;

  static LambdaTerm var(std::string name);
  static LambdaTerm constant(std::string name);
  static LambdaTerm app(LambdaTerm f, LambdaTerm a);
  static LambdaTerm lam(std::string var, MillFormula type, LambdaTerm body);
  static LambdaTerm pair(LambdaTerm a, LambdaTerm b);
  // let <x, y> = bound in body
  static LambdaTerm let_pair(std::string x, std::string y, LambdaTerm bound, LambdaTerm body);

  Kind kind() const;
  const std::string& name() const;   // Var, Const, Lam binder, LetPair first binder
  const std::string& name2() const;  // LetPair second binder
  const MillFormula& type() const;   // Lam binder type
  const LambdaTerm& left() const;    // App function, Lam body, Pair first, LetPair bound
  const LambdaTerm& right() const;   // App argument, Pair second, LetPair body

  std::string str(bool types = false) const;

 private:
  explicit LambdaTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Hypotheses below names.size() become constants with those names; the
// others become variables.
LambdaTerm lambda_term(const NDProof& nd, const std::vector<std::string>& names);

// Linear type check. Constants are typed by the map and must each occur
// exactly once; every bound variable must occur exactly once. Returns the
// type, or nullopt with a message in *why.
std::optional<MillFormula> linear_type(const LambdaTerm& t,
                                       const std::map<std::string, MillFormula>& constants,
                                       std::string* why = nullptr);

}  // namespace mill1

#endif  // MILL1_SEMANTICS_HPP

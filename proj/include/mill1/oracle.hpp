// Random generators and brute-force references used by the property tests
// and the `oracle` CLI command.

#ifndef MILL1_ORACLE_HPP
#define MILL1_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mill1/formula.hpp"
#include "mill1/proofnet.hpp"

namespace mill1 {

using Rng = std::mt19937_64;

struct RandomConfig {
  int max_literals = 8;
  int max_depth = 4;
  double quantifier_rate = 0.3;
  int max_antecedents = 3;
};

int literal_count(const MillFormula& f);
int literal_count(const Sequent& s);

MillFormula random_formula(Rng& rng, const RandomConfig& cfg, int literals);

// Random sequent whose positive and negative literals balance per predicate.
Sequent random_sequent(Rng& rng, const RandomConfig& cfg);

// Builds a sequent bottom-up from sequent calculus rules, so it is derivable
// by construction. Closed; constants become quantified variables.
Sequent random_derivable_sequent(Rng& rng, int literals);

// Frame with at most max_async asynchronous links and a random complete
// matching whose pairs unify. nullopt when the attempt fails.
std::optional<ProofStructure> random_structure(Rng& rng, const RandomConfig& cfg, int max_async);

// All complete matchings pairing literals of equal predicate and arity.
std::vector<Matching> all_matchings(const ProofFrame& frame);
// Matchings that unify, respect strictness and pass the switching check.
std::vector<Matching> brute_force_nets(const ProofFrame& frame);

// Replaces the constant named c by t in every atom of f.
MillFormula abstract_constant(const MillFormula& f, const std::string& c, const Term& t);
std::vector<std::string> constants_of(const MillFormula& f);

// First proof found by the prover; throws std::logic_error if there is none.
ProofStructure first_net(const std::vector<MillFormula>& antecedent, const MillFormula& goal);

// Two nets for random derivable sequents joined by one cut. The cut formula
// shape cycles with round: identity, tensor, implication, identity on the
// left.
ProofStructure random_cut_composition(Rng& rng, int round);

}  // namespace mill1

#endif  // MILL1_ORACLE_HPP

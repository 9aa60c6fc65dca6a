// Proof search over axiom matchings.
//
// Depth-first: pick the unmatched literal with the fewest conjugates, try
// each conjugate in turn, unify, rebuild the partial contraction graph and
// prune states that can no longer become a net.

#ifndef MILL1_PROVER_HPP
#define MILL1_PROVER_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mill1/formula.hpp"
#include "mill1/proofnet.hpp"

namespace mill1 {

enum class PruneReason {
  CycleRisk,       // solid self-loop or async edge back onto its own source
  DisconnectRisk,  // literal-free async leaf that can never contract
  IsolatedEmpty,   // literal-free vertex cut off from the rest
  NoConjugate,     // some literal has no candidate left
  NotNet,          // complete matching that fails the contraction check
  Strictness,
};

const char* prune_reason_name(PruneReason r);

struct SelectionStep {
  int literal = -1;
  std::size_t conjugates = 0;
};

struct SearchStats {
  std::size_t expansions = 0;
  std::map<PruneReason, std::size_t> prunes;
  std::size_t proofs = 0;
  double seconds = 0;
  std::vector<SelectionStep> selections;  // in search order

  std::string str() const;
};

struct ProveOptions {
  std::size_t limit = 0;   // stop after this many proofs; 0 means all
  std::size_t budget = 0;  // expansions; 0 means MILL1_NODE_BUDGET or 1000000
  int jobs = 1;            // workers splitting the candidates of the first choice
  bool record_selections = false;
};

struct ProveResult {
  std::vector<ProofStructure> proofs;
  SearchStats stats;
};

std::size_t default_node_budget();

// Throws ResourceLimit when the budget runs out.
ProveResult prove(const ProofFrame& frame, const ProveOptions& opts = {});
ProveResult prove(const std::vector<MillFormula>& antecedent, const MillFormula& succedent,
                  const ProveOptions& opts = {});

// Partial search state, exposed for testing the heuristics.
struct SearchState {
  const ProofFrame* frame = nullptr;
  Matching matching;
  Substitution subst;
};

// Literals of opposite polarity that unify with l, lie on another vertex of
// the contracted partial graph and would not close a cycle.
std::vector<int> conjugates(const SearchState& s, const ContractionGraph& normal, int literal);
// Literal with the fewest conjugates; ties go to the earliest literal.
// nullopt when every literal is matched.
std::optional<int> select_literal(const SearchState& s);
// Checks a normalized partial graph; nullopt when the state may still lead
// to a net.
std::optional<PruneReason> eager_filters(const ContractionGraph& normal);
// Filters the state reached by linking literals a and b (already unifiable).
std::optional<PruneReason> eager_filters(const SearchState& s, int a, int b);

}  // namespace mill1

#endif  // MILL1_PROVER_HPP

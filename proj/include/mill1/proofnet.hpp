// Proof frames, proof structures and their correctness checks.
//
// Links follow the usual MILL1 table. A link's conclusion is the formula
// below it; its premisses are the formulas above it. Negative tensor and
// positive lolli unfold to par links, positive tensor and negative lolli to
// tensor links. Positive forall and negative exists are universal links with
// a fresh rigid eigenvariable; negative forall and positive exists are
// existential links with a fresh metavariable.

#ifndef MILL1_PROOFNET_HPP
#define MILL1_PROOFNET_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mill1/formula.hpp"
#include "mill1/term.hpp"

namespace mill1 {

enum class LinkKind { Axiom, Cut, Par, Tensor, Universal, Existential };

inline bool is_asynchronous(LinkKind k) { return k == LinkKind::Par || k == LinkKind::Universal; }
const char* link_kind_name(LinkKind k);

struct FrameNode {
  MillFormula formula;  // with quantified variables already instantiated
  Polarity polarity = Polarity::Negative;
  int producer = -1;  // logical link with this node as conclusion; -1 for atoms
  int consumer = -1;  // link with this node as premiss; -1 for sequent conclusions
  int literal = -1;
  int root = -1;      // index into ProofFrame::conclusions
  bool alive = true;
};

struct Link {
  LinkKind kind = LinkKind::Tensor;
  std::vector<int> premisses;
  std::vector<int> conclusions;
  Term var;  // eigenvariable or metavariable of a quantifier link
  bool alive = true;
};

struct Literal {
  int node = -1;
  Polarity polarity = Polarity::Negative;
  std::string pred;
  std::vector<Term> args;
};

struct ProofFrame {
  std::vector<FrameNode> nodes;
  std::vector<Link> links;
  std::vector<Literal> literals;  // document order
  std::vector<int> conclusions;   // antecedent formulas in order, then the succedent
  std::set<VarId> eigenvariables;
  std::set<VarId> metavariables;

  int async_link_count() const;
  std::string literal_str(int literal, const Substitution& s, VarNames& names) const;
};

ProofFrame unfold(const std::vector<MillFormula>& antecedent, const MillFormula& succedent);

// Axiom links as (negative literal, positive literal) pairs.
using Matching = std::vector<std::pair<int, int>>;
Matching normalize_matching(Matching m);

struct ProofStructure {
  ProofFrame frame;
  Matching matching;
  Substitution subst;

  bool has_cuts() const;
  std::vector<MillFormula> conclusion_formulas() const;
};

enum class MatchFailure { None, Pairing, Unification, Strictness };

struct MatchResult {
  std::optional<ProofStructure> structure;
  MatchFailure failure = MatchFailure::None;
};

// Unifies every axiom pair and applies the strictness check.
MatchResult axiom_match(const ProofFrame& frame, const Matching& matching);

// True when some metavariable is instantiated with an eigenvariable that
// could be replaced by an unused constant without breaking the proof.
bool violates_strictness(const ProofStructure& ps);

// Exhaustive switching check. Exponential; for testing.
bool check_switchings(const ProofStructure& ps);

class ContractionGraph {
 public:
  enum class EdgeType { Solid, Par, Universal };
  struct Edge {
    EdgeType type = EdgeType::Solid;
    int from = -1;
    int to = -1;
    int to2 = -1;  // second target of a par pair
    VarId eigen = 0;
    bool alive = true;
  };
  struct Vertex {
    std::set<VarId> eigen;          // eigenvariables occurring in the merged formulas
    std::set<VarId> flexible;       // unbound metavariables occurring there
    std::set<VarId> pending_rigid;  // eigenvariables inside pending literals
    std::vector<int> literals;      // pending literals
    std::vector<int> members;       // frame nodes merged into this vertex
  };

  int add_vertex(std::set<VarId> eigen = {}, std::vector<int> literals = {});
  int add_solid(int a, int b);
  int add_par(int from, int to1, int to2);
  int add_universal(int from, int to, VarId eigen);

  // Treats eigenvariables in pending literals as future occurrences.
  void set_partial(bool partial) { partial_ = partial; }
  bool partial() const { return partial_; }

  int find(int v) const;
  std::vector<int> vertices() const;  // live representatives, ascending
  std::size_t vertex_count() const;
  const Vertex& vertex(int v) const { return vertices_[static_cast<std::size_t>(find(v))]; }
  Vertex& vertex_mut(int v) { return vertices_[static_cast<std::size_t>(find(v))]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Edge> live_edges() const;  // endpoints mapped to representatives
  std::size_t live_edge_count() const;

  // Merges b into a; returns the representative.
  int merge(int a, int b);
  void kill_edge(std::size_t e) { edges_[e].alive = false; }

  std::string str() const;

 private:
  std::vector<Vertex> vertices_;
  mutable std::vector<int> parent_;
  std::vector<Edge> edges_;
  bool partial_ = false;
};

ContractionGraph to_contraction_graph(const ProofStructure& ps);
// Partial structure: pending literals are those not covered by matching.
ContractionGraph to_contraction_graph(const ProofFrame& frame, const Matching& matching,
                                      const Substitution& subst);

struct ContractionStep {
  char rule = 'c';  // 'c', 'p' or 'u'
  int into = -1;
  int from = -1;
  VarId eigen = 0;
};

struct ContractOptions {
  bool random_order = false;
  std::uint64_t seed = 0;
  bool trace = false;
};

struct ContractionResult {
  bool net = false;
  ContractionGraph normal_form;
  std::vector<ContractionStep> trace;
  std::size_t c_steps = 0;
  std::size_t p_steps = 0;
  std::size_t u_steps = 0;
};

// Applies c eagerly, then p, then u, until nothing applies. With
// random_order, picks uniformly among all applicable contractions.
ContractionResult contract(ContractionGraph g, const ContractOptions& opts = {});

bool is_net(const ProofStructure& ps);

// Cut between the succedent of left and antecedent formula index of right.
// The cut formulas must be alpha-equivalent.
ProofStructure compose_cut(const ProofStructure& left, const ProofStructure& right,
                           int right_antecedent_index);

struct CutStats {
  std::size_t axiom = 0;
  std::size_t multiplicative = 0;
  std::size_t quantifier = 0;
};

ProofStructure eliminate_cut(const ProofStructure& ps, CutStats* stats = nullptr);

std::string render_dot(const ProofStructure& ps);
std::string render_dot(const ContractionGraph& g);

}  // namespace mill1

#endif  // MILL1_PROOFNET_HPP

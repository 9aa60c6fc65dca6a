#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <functional>

#include "mill1/errors.hpp"
#include "mill1/oracle.hpp"
#include "mill1/prover.hpp"
#include "mill1/translate.hpp"

using namespace mill1;

namespace {

ProveResult run(const char* text, ProveOptions o = {}) {
  const Sequent s = parse_sequent(text);
  return prove(s.antecedent, s.succedent, o);
}

std::vector<Matching> matchings(const ProveResult& r) {
  std::vector<Matching> out;
  for (const auto& p : r.proofs) out.push_back(p.matching);
  return out;
}

}  // namespace

TEST_CASE("quantifier order sequents") {
  CHECK(run("exists X. forall Y. f(X,Y) |- forall V. exists W. f(W,V)").proofs.size() == 1);
  CHECK(run("forall X. exists Y. f(X,Y) |- exists V. forall W. f(W,V)").proofs.empty());
}

TEST_CASE("small sequents") {
  CHECK(run("a |- a").proofs.size() == 1);
  CHECK(run("a, a |- a * a").proofs.size() == 2);
  CHECK(run("a -o b, b -o c |- a -o c").proofs.size() == 1);
  CHECK(run("a * b |- b * a").proofs.size() == 1);
  CHECK(run("a |- b").proofs.empty());
  CHECK(run("a, b |- a").proofs.empty());
  CHECK(run("a -o b |- b -o a").proofs.empty());
  CHECK(run("forall X. p(X) |- p(c)").proofs.size() == 1);
  CHECK(run("p(c) |- forall X. p(X)").proofs.empty());
  CHECK(run("p(c) |- exists X. p(X)").proofs.size() == 1);
  CHECK(run("exists X. p(X) |- p(c)").proofs.empty());
}

TEST_CASE("every proof is a strict net") {
  for (const char* s : {"a, a |- a * a", "forall X. p(X), q -o r |- exists Y. p(Y) * (q -o r)",
                        "exists X. forall Y. f(X,Y) |- forall V. exists W. f(W,V)"}) {
    for (const auto& p : run(s).proofs) {
      CHECK(is_net(p));
      CHECK(check_switchings(p));
      CHECK_FALSE(violates_strictness(p));
    }
  }
}

TEST_CASE("limit stops early") {
  ProveOptions o;
  o.limit = 1;
  CHECK(run("a, a, a |- a * a * a", o).proofs.size() == 1);
  CHECK(run("a, a, a |- a * a * a").proofs.size() == 6);
}

TEST_CASE("literal selection") {
  const Sequent s = parse_sequent("a, a |- a * a");
  const ProofFrame f = unfold(s.antecedent, s.succedent);
  SearchState st{&f, {}, {}};
  const auto lit = select_literal(st);
  REQUIRE(lit);
  CHECK(*lit == 0);
  ProveOptions o;
  o.record_selections = true;
  const ProveResult r = prove(f, o);
  REQUIRE(!r.stats.selections.empty());
  CHECK(r.stats.selections.front().conjugates == 2);

  const ProofFrame one = unfold({parse_mill("a")}, parse_mill("a"));
  SearchState st1{&one, {}, {}};
  CHECK(select_literal(st1) == 0);
  st1.matching = {{0, 1}};
  CHECK_FALSE(select_literal(st1));
}

TEST_CASE("selection prefers the most constrained literal") {
  // Both b literals have one conjugate, the a literals two.
  const Sequent s = parse_sequent("a, a, b |- (a * a) * b");
  const ProofFrame f = unfold(s.antecedent, s.succedent);
  SearchState st{&f, {}, {}};
  const auto lit = select_literal(st);
  REQUIRE(lit);
  CHECK(f.literals[static_cast<std::size_t>(*lit)].pred == "b");
}

TEST_CASE("conjugates skip literals on the same vertex") {
  // The hypothesis a -o a unfolds to a tensor, so its two literals end up on
  // one vertex and linking them would close a cycle.
  const ProofFrame f = unfold({parse_mill("a -o a"), parse_mill("a")}, parse_mill("a"));
  REQUIRE(f.literals.size() == 4);
  REQUIRE(f.literals[0].polarity == Polarity::Positive);
  SearchState st{&f, {}, {}};
  const ContractionResult c = contract(to_contraction_graph(f, {}, {}));
  CHECK(conjugates(st, c.normal_form, 0) == std::vector<int>{2});
}

TEST_CASE("eager filters") {
  SUBCASE("cycle") {
    const ProofFrame f = unfold({}, parse_mill("(a -o a) * (a -o a)"));
    SearchState st{&f, {}, {}};
    // Linking inside one implication and then across would close a loop
    // through the tensor.
    st.matching = {{0, 1}};
    CHECK(eager_filters(st, 2, 3) == std::nullopt);
    CHECK(eager_filters(st, 0, 1) == PruneReason::CycleRisk);
  }
  SUBCASE("isolated") {
    ContractionGraph g;
    g.add_vertex();
    g.add_vertex({}, {0});
    CHECK(eager_filters(g) == PruneReason::IsolatedEmpty);
  }
  SUBCASE("disconnect") {
    // An async leaf without literals whose eigenvariable also lives
    // elsewhere can never contract.
    const VarId x = fresh_id();
    ContractionGraph g;
    const int top = g.add_vertex({}, {0}), leaf = g.add_vertex({x}), other = g.add_vertex({x}, {1});
    g.add_universal(top, leaf, x);
    g.add_solid(top, other);
    CHECK(eager_filters(g) == PruneReason::DisconnectRisk);
  }
  SUBCASE("fine") {
    ContractionGraph g;
    g.add_vertex({}, {0, 1});
    CHECK(eager_filters(g) == std::nullopt);
  }
}

// Every way of completing a pruned state must fail.
TEST_CASE("pruning is sound on small frames") {
  Rng rng(23);
  RandomConfig cfg;
  cfg.max_literals = 6;
  int pruned = 0;
  for (int i = 0; i < 150; ++i) {
    const Sequent s = random_sequent(rng, cfg);
    const ProofFrame f = unfold(s.antecedent, s.succedent);
    const auto nets = brute_force_nets(f);
    std::set<Matching> net_set(nets.begin(), nets.end());
    for (const Matching& m : all_matchings(f)) {
      // Walk the prefix of the full matching pair by pair.
      SearchState st{&f, {}, {}};
      for (const auto& [a, b] : m) {
        auto u = unify_all(f.literals[static_cast<std::size_t>(a)].args,
                           f.literals[static_cast<std::size_t>(b)].args, st.subst);
        if (!u) break;
        if (eager_filters(st, a, b)) {
          ++pruned;
          CHECK_MESSAGE(net_set.count(normalize_matching(m)) == 0, sequent_str(s));
          break;
        }
        st.subst = *u;
        st.matching.emplace_back(a, b);
      }
    }
  }
  CHECK(pruned > 0);
}

TEST_CASE("search agrees with exhaustive enumeration") {
  Rng rng(99);
  RandomConfig cfg;
  int n = 0;
  for (int i = 0; i < 200; ++i) {
    const Sequent s = (i % 2) ? random_sequent(rng, cfg) : random_derivable_sequent(rng, 2 + 2 * (i % 4));
    if (literal_count(s) > 8) continue;
    ++n;
    const ProofFrame f = unfold(s.antecedent, s.succedent);
    auto found = matchings(prove(f));
    std::sort(found.begin(), found.end());
    CHECK_MESSAGE(found == brute_force_nets(f), sequent_str(s));
    if (i % 2 == 0) CHECK_MESSAGE(!found.empty(), sequent_str(s));
  }
  CHECK(n > 100);
}

TEST_CASE("deterministic and thread independent") {
  const char* s = "a -o b, b -o c, a, a -o b, b -o c, a |- c * c";
  const auto first = matchings(run(s));
  CHECK(first == matchings(run(s)));
  ProveOptions o;
  o.jobs = 4;
  CHECK(first == matchings(run(s, o)));
  const Sequent q = parse_sequent(s);
  auto sorted = first;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == brute_force_nets(unfold(q.antecedent, q.succedent)));
  CHECK(first.size() == 8);
}

TEST_CASE("budget") {
  ProveOptions o;
  o.budget = 3;
  CHECK_THROWS_AS(run("a, a, a, a |- a * a * a * a", o), ResourceLimit);
  setenv("MILL1_NODE_BUDGET", "5", 1);
  CHECK(default_node_budget() == 5);
  CHECK_THROWS_AS(run("a, a, a, a |- a * a * a * a"), ResourceLimit);
  unsetenv("MILL1_NODE_BUDGET");
  CHECK(default_node_budget() == 1000000);
}

TEST_CASE("statistics") {
  const ProveResult r = run("a, a |- a * a");
  CHECK(r.stats.proofs == 2);
  CHECK(r.stats.expansions > 0);
  const std::string text = r.stats.str();
  CHECK(text.find("expansions") != std::string::npos);
  CHECK(text.find("proofs") != std::string::npos);
}

TEST_CASE("Horn clauses need nothing special") {
  CHECK(run("np(0,1), forall X Y. np(X,Y) -o s(X,Y) |- s(0,1)").proofs.size() == 1);
  CHECK(run("np(0,1), forall X. np(X,2) -o s(X,2) |- s(0,2)").proofs.empty());
}

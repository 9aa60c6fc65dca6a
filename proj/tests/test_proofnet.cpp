#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cctype>

#include "mill1/oracle.hpp"
#include "mill1/proofnet.hpp"
#include "mill1/prover.hpp"

using namespace mill1;

namespace {

const char* kUnderHyp = "forall X. exists Y. f(X,Y)";
const char* kUnderGoal = "exists V. forall W. f(W,V)";
const char* kDerHyp = "exists X. forall Y. f(X,Y)";
const char* kDerGoal = "forall V. exists W. f(W,V)";

ProofStructure only_structure(const char* hyp, const char* goal) {
  const ProofFrame f = unfold({parse_mill(hyp)}, parse_mill(goal));
  REQUIRE(f.literals.size() == 2);
  const int neg = f.literals[0].polarity == Polarity::Negative ? 0 : 1;
  MatchResult r = axiom_match(f, {{neg, 1 - neg}});
  REQUIRE(r.structure);
  return *r.structure;
}

// Vertex labels as sorted lists of lower-cased eigenvariable names.
std::vector<std::string> labels(const ProofStructure& ps, const ContractionGraph& g) {
  std::map<VarId, std::string> names;
  for (const auto& n : ps.frame.nodes)
    for (const auto& [id, t] : free_var_terms(n.formula)) {
      std::string s = t.name();
      for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      names[id] = s;
    }
  std::vector<std::string> out;
  for (int v : g.vertices()) {
    std::vector<std::string> l;
    for (VarId e : g.vertex(v).eigen) l.push_back(names[e]);
    std::sort(l.begin(), l.end());
    std::string s;
    for (const auto& n : l) s += n;
    out.push_back("{" + s + "}");
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("unfolding") {
  const ProofFrame trivial = unfold({parse_mill("a")}, parse_mill("a"));
  CHECK(trivial.literals.size() == 2);
  CHECK(trivial.links.empty());
  CHECK(trivial.literals[0].polarity == Polarity::Negative);
  CHECK(trivial.literals[1].polarity == Polarity::Positive);

  const ProofFrame under = unfold({parse_mill(kUnderHyp)}, parse_mill(kUnderGoal));
  CHECK(under.eigenvariables.size() == 2);
  CHECK(under.metavariables.size() == 2);
  CHECK(under.async_link_count() == 2);

  const ProofFrame conn = unfold({parse_mill("a * b"), parse_mill("a -o c")}, parse_mill("b -o c"));
  std::map<LinkKind, int> kinds;
  for (const Link& l : conn.links) ++kinds[l.kind];
  CHECK(kinds[LinkKind::Par] == 2);
  CHECK(kinds[LinkKind::Tensor] == 1);
  for (const FrameNode& n : conn.nodes) CHECK(n.producer >= -1);
}

TEST_CASE("axiom matching") {
  const ProofStructure under = only_structure(kUnderHyp, kUnderGoal);
  CHECK(under.matching.size() == 1);
  const ProofStructure der = only_structure(kDerHyp, kDerGoal);
  for (VarId m : der.frame.metavariables) {
    const Term* t = der.subst.lookup(m);
    REQUIRE(t);
    CHECK(t->is_rigid());
  }
  const ProofFrame clash = unfold({parse_mill("np")}, parse_mill("s"));
  CHECK(axiom_match(clash, {{0, 1}}).failure == MatchFailure::Pairing);
  const ProofFrame ground = unfold({parse_mill("np(1,2)")}, parse_mill("np(1,3)"));
  CHECK(axiom_match(ground, {{0, 1}}).failure == MatchFailure::Unification);
}

TEST_CASE("switching oracle on the quantifier order examples") {
  CHECK(check_switchings(only_structure(kDerHyp, kDerGoal)));
  CHECK_FALSE(check_switchings(only_structure(kUnderHyp, kUnderGoal)));
  CHECK(check_switchings(only_structure("a", "a")));
}

TEST_CASE("contraction graph labels") {
  const ProofStructure under = only_structure(kUnderHyp, kUnderGoal);
  CHECK(labels(under, to_contraction_graph(under)) ==
        sorted({"{w}", "{wy}", "{wy}", "{y}", "{}", "{}"}));
  const ProofStructure der = only_structure(kDerHyp, kDerGoal);
  CHECK(labels(der, to_contraction_graph(der)) ==
        sorted({"{v}", "{vx}", "{vx}", "{x}", "{}", "{}"}));
  const ProofFrame atom = unfold({}, parse_mill("a"));
  CHECK(to_contraction_graph(atom, {}, {}).vertex_count() == 1);
}

TEST_CASE("contraction on the quantifier order examples") {
  const ProofStructure under = only_structure(kUnderHyp, kUnderGoal);
  const ContractionResult ru = contract(to_contraction_graph(under));
  CHECK_FALSE(ru.net);
  CHECK(labels(under, ru.normal_form) == sorted({"{w}", "{wy}", "{y}"}));
  CHECK(ru.u_steps == 0);

  const ProofStructure der = only_structure(kDerHyp, kDerGoal);
  const ContractionResult rd = contract(to_contraction_graph(der));
  CHECK(rd.net);
  CHECK(rd.u_steps == 2);
  CHECK(rd.normal_form.vertex_count() == 1);
  CHECK(rd.normal_form.live_edge_count() == 0);

  ContractionGraph single;
  single.add_vertex();
  CHECK(contract(single).net);
}

TEST_CASE("p contraction needs both targets on one vertex") {
  ContractionGraph g;
  const int a = g.add_vertex(), b = g.add_vertex(), c = g.add_vertex();
  g.add_par(a, b, c);
  CHECK_FALSE(contract(g).net);
  g.add_solid(b, c);
  const ContractionResult r = contract(g);
  CHECK(r.net);
  CHECK(r.c_steps == 1);
  CHECK(r.p_steps == 1);
}

TEST_CASE("u contraction respects eigenvariable locality") {
  const VarId x = fresh_id();
  ContractionGraph g;
  const int top = g.add_vertex(), mid = g.add_vertex({x}), other = g.add_vertex({x});
  g.add_universal(top, mid, x);
  g.add_solid(top, other);
  CHECK_FALSE(contract(g).net);

  ContractionGraph h;
  const int t2 = h.add_vertex(), m2 = h.add_vertex({x});
  h.add_universal(t2, m2, x);
  const ContractionResult r = contract(h);
  CHECK(r.net);
  CHECK(r.normal_form.vertex(r.normal_form.vertices().front()).eigen.empty());
}

TEST_CASE("progress meter and locality on random structures") {
  Rng rng(17);
  RandomConfig cfg;
  int checked = 0;
  while (checked < 300) {
    auto ps = random_structure(rng, cfg, 4);
    if (!ps) continue;
    ++checked;
    const ContractionGraph g = to_contraction_graph(*ps);
    ContractOptions o;
    o.trace = true;
    const ContractionResult r = contract(g, o);
    CHECK(r.trace.size() == r.c_steps + r.p_steps + r.u_steps);
    // every contraction merges two vertices
    CHECK(g.vertex_count() - r.normal_form.vertex_count() == r.trace.size());
    std::size_t async_before = 0, async_after = 0;
    for (const auto& e : g.live_edges()) async_before += e.type != ContractionGraph::EdgeType::Solid;
    for (const auto& e : r.normal_form.live_edges()) async_after += e.type != ContractionGraph::EdgeType::Solid;
    CHECK(async_before - async_after == r.p_steps + r.u_steps);
    for (const auto& step : r.trace) {
      if (step.rule != 'u') continue;
      for (int v : r.normal_form.vertices()) CHECK(r.normal_form.vertex(v).eigen.count(step.eigen) == 0);
    }
    if (r.net) CHECK(r.normal_form.vertex_count() == 1);
  }
}

TEST_CASE("strictness") {
  CHECK_FALSE(violates_strictness(only_structure(kDerHyp, kDerGoal)));

  // Binding the witness to the eigenvariable is not needed here: the net
  // survives with an unused constant instead.
  const ProofFrame f = unfold({}, parse_mill("forall Y. exists X. p(X) -o p(X)"));
  MatchResult r = axiom_match(f, {{0, 1}});
  REQUIRE(r.structure);
  ProofStructure ps = *r.structure;
  REQUIRE(ps.frame.metavariables.size() == 1);
  REQUIRE(ps.frame.eigenvariables.size() == 1);
  CHECK_FALSE(violates_strictness(ps));
  ps.subst.assign(*ps.frame.metavariables.begin(), Term::var(*ps.frame.eigenvariables.begin(), "Y", true));
  CHECK(is_net(ps));
  CHECK(violates_strictness(ps));
}

TEST_CASE("cut elimination, multiplicative case") {
  const ProofStructure left = first_net({parse_mill("a"), parse_mill("b")}, parse_mill("a * b"));
  const ProofStructure right = first_net({parse_mill("a * b")}, parse_mill("a * b"));
  const ProofStructure cut = compose_cut(left, right, 0);
  CHECK(cut.has_cuts());
  CHECK(is_net(cut));
  CutStats st;
  const ProofStructure out = eliminate_cut(cut, &st);
  CHECK_FALSE(out.has_cuts());
  CHECK(is_net(out));
  CHECK(st.multiplicative == 1);
  CHECK(st.axiom >= 2);
  const auto c = out.conclusion_formulas();
  REQUIRE(c.size() == 3);
  CHECK(c[0] == parse_mill("a"));
  CHECK(c[1] == parse_mill("b"));
  CHECK(c[2] == parse_mill("a * b"));
  CHECK(out.frame.literals.size() == left.frame.literals.size());
}

TEST_CASE("cut elimination, quantifier case") {
  const ProofStructure left = first_net({parse_mill("p(c)")}, parse_mill("exists X. p(X)"));
  const ProofStructure right = first_net({parse_mill("exists X. p(X)")}, parse_mill("exists Y. p(Y)"));
  CutStats st;
  const ProofStructure out = eliminate_cut(compose_cut(left, right, 0), &st);
  CHECK(st.quantifier == 1);
  CHECK_FALSE(out.has_cuts());
  CHECK(is_net(out));
  CHECK(check_switchings(out));
}

TEST_CASE("cut elimination, axiom case") {
  const ProofStructure id = first_net({parse_mill("a")}, parse_mill("a"));
  CutStats st;
  const ProofStructure out = eliminate_cut(compose_cut(id, id, 0), &st);
  CHECK(st.axiom == 1);
  CHECK(st.multiplicative + st.quantifier == 0);
  CHECK(out.frame.literals.size() == 2);
  CHECK(is_net(out));
}

TEST_CASE("cut formulas must agree") {
  const ProofStructure a = first_net({parse_mill("a")}, parse_mill("a"));
  const ProofStructure b = first_net({parse_mill("b")}, parse_mill("b"));
  CHECK_THROWS_AS(compose_cut(a, b, 0), std::invalid_argument);
}

TEST_CASE("dot output is deterministic") {
  const ProofStructure der = only_structure(kDerHyp, kDerGoal);
  const std::string d = render_dot(der);
  CHECK(d == render_dot(der));
  CHECK(d.find("digraph") != std::string::npos);
  CHECK(d.find("dotted") != std::string::npos);
  const std::string g = render_dot(to_contraction_graph(der));
  CHECK(g.find("dotted") != std::string::npos);
}

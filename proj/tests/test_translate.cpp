#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "mill1/errors.hpp"
#include "mill1/proofnet.hpp"
#include "mill1/prover.hpp"
#include "mill1/translate.hpp"

using namespace mill1;

namespace {

std::vector<Term> ints(std::initializer_list<int> v) {
  std::vector<Term> out;
  for (int i : v) out.push_back(Term::integer(i));
  return out;
}

MillFormula tr(const char* d, std::vector<Term> pos, const AtomSortTable& st = {}) {
  return translate_d(parse_d(d), pos, st);
}

bool derivable(const std::vector<MillFormula>& ant, const MillFormula& goal) {
  return !prove(ant, goal).proofs.empty();
}

}  // namespace

TEST_CASE("determiner") {
  CHECK(alpha_equivalent(tr("np/n", ints({4, 5})), parse_mill("forall X. n(5,X) -o np(4,X)")));
}

TEST_CASE("did") {
  const MillFormula f = tr("((vp ^ vp) / vp) \\ (vp ^ vp)", ints({4, 5}));
  const MillFormula expected = parse_mill(
      "forall X0 X1 X2. (forall X3. vp(4,X3) -o vp(X1,X2) -o vp(X0,X3)) -o vp(X1,X2) -o vp(X0,5)");
  CHECK_MESSAGE(alpha_equivalent(f, expected), f.str());
  CHECK(drop_quantifiers(f) == parse_mill("(vp -o vp -o vp) -o vp -o vp"));
}

TEST_CASE("object reflexive") {
  const MillFormula f = tr("((vp ^> np) ^< np) !< (vp ^> np)", ints({3, 4}));
  const MillFormula expected = parse_mill(
      "forall X0 X1 X2 X5. (np(3,4) -o np(X1,X2) -o vp(X0,X5)) -o np(X1,X2) -o vp(X0,X5)");
  CHECK_MESSAGE(alpha_equivalent(f, expected), f.str());
}

TEST_CASE("synthetic connectives") {
  std::map<std::string, Term> env;
  const Term x0 = parse_mill("p(P0)", &env).args()[0];
  const Term x2 = parse_mill("p(P2)", &env).args()[0];
  CHECK(alpha_equivalent(tr("hat(a ^ b)", {x0, x2}), parse_mill("exists X1. b(X1,X1) -o a(P0,P2)", &env)));
  CHECK(alpha_equivalent(tr("check(a) ! b", {x0, x0}), parse_mill("forall X0 X2. a(X0,X2) -o b(X0,X2)")));
  CHECK(alpha_equivalent(tr("rproj(a ^> b)", {x0, x2}), parse_mill("forall X. b(X,P0) -o a(X,P2)", &env)));
  CHECK(alpha_equivalent(tr("lproj(a ^> b)", {x0, x2}), parse_mill("forall X. b(P2,X) -o a(P0,X)", &env)));
}

TEST_CASE("units that force distinct constants together are rejected") {
  try {
    tr("check(a) ! b", ints({1, 2}));
    FAIL("expected an identity constraint");
  } catch (const TranslateError& e) {
    CHECK(e.kind() == TranslateError::Kind::IdentityConstraint);
  }
}

TEST_CASE("Lambek special case") {
  std::map<std::string, Term> env;
  const Term x1 = parse_mill("p(P1)", &env).args()[0];
  const Term x2 = parse_mill("p(P2)", &env).args()[0];
  CHECK(alpha_equivalent(tr("a \\ c", {x1, x2}), parse_mill("forall X0. a(X0,P1) -o c(X0,P2)", &env)));
  CHECK(alpha_equivalent(tr("c / b", {x1, x2}), parse_mill("forall X0. b(P2,X0) -o c(P1,X0)", &env)));
  CHECK(alpha_equivalent(tr("a * b", {x1, x2}), parse_mill("exists X0. a(P1,X0) * b(X0,P2)", &env)));
}

TEST_CASE("wrap directions coincide on sort 0 arguments") {
  const auto p = ints({0, 1, 2, 3});
  CHECK(alpha_equivalent(tr("a ^> b", p), tr("a ^< b", p)));
  CHECK(alpha_equivalent(tr("((a ^> b) o> b)", ints({0, 1})), tr("((a ^< b) o< b)", ints({0, 1}))));
  AtomSortTable st;
  st.set("v", 1);
  CHECK(alpha_equivalent(tr("v !> a", ints({0, 1}), st), tr("v !< a", ints({0, 1}), st)));
}

TEST_CASE("arity mismatch") {
  try {
    tr("np", ints({1, 2, 3, 4}));
    FAIL("expected an arity mismatch");
  } catch (const TranslateError& e) {
    CHECK(e.kind() == TranslateError::Kind::ArityMismatch);
  }
  AtomSortTable st;
  st.set("np", 1);
  CHECK_THROWS_AS(tr("hat(np) / np", ints({0, 1}), st), SortError);
}

TEST_CASE("features ride after the positions") {
  const MillFormula f = tr("np(nom) / n(N)", ints({1, 2}));
  REQUIRE(f.kind() == MillFormula::Kind::Forall);
  REQUIRE(f.body().kind() == MillFormula::Kind::Lolli);
  CHECK(f.body().left().args().size() == 3);
  CHECK(f.body().right().args()[2] == Term::constant("nom"));
}

TEST_CASE("non-associative encoding") {
  CHECK(alpha_equivalent(translate_nonassoc(parse_d("a/b")), parse_mill("forall X. b(s(X)) -o a(X)")));
  CHECK(alpha_equivalent(translate_nonassoc(parse_d("a/c")), parse_mill("forall Z. c(s(Z)) -o a(Z)")));
  CHECK(alpha_equivalent(translate_nonassoc(parse_d("a")), parse_mill("forall X. a(X)")));
  CHECK(alpha_equivalent(translate_nonassoc(parse_d("a * b")), parse_mill("forall X. a(s(X)) * b(s(X))")));
  CHECK(derivable({translate_nonassoc(parse_d("a"))}, translate_nonassoc(parse_d("a"))));
  CHECK(derivable({translate_nonassoc(parse_d("a/b")), translate_nonassoc(parse_d("b"))},
                  translate_nonassoc(parse_d("a"))));
  CHECK_FALSE(derivable({translate_nonassoc(parse_d("a/b")), translate_nonassoc(parse_d("b/c"))},
                        translate_nonassoc(parse_d("a/c"))));
  try {
    translate_nonassoc(parse_d("a ^> b"));
    FAIL("expected an unsupported connective");
  } catch (const TranslateError& e) {
    CHECK(e.kind() == TranslateError::Kind::UnsupportedConnective);
  }
}

TEST_CASE("associative translation proves composition") {
  CHECK(derivable({tr("a/b", ints({0, 1})), tr("b/c", ints({1, 2}))}, tr("a/c", ints({0, 2}))));
}

TEST_CASE("scope levels") {
  const Term p0 = Term::integer(0), p1 = Term::integer(1);
  CHECK(alpha_equivalent(translate_scope(1, p0, p1), parse_mill("forall X. s(0,1,s(X))")));
  CHECK(alpha_equivalent(translate_scope(3, p0, p1), parse_mill("forall X. s(0,1,s(s(s(X))))")));
  CHECK(derivable({translate_scope(1, p0, p1)}, translate_scope(2, p0, p1)));
  CHECK_FALSE(derivable({translate_scope(2, p0, p1)}, translate_scope(1, p0, p1)));
}

TEST_CASE("drop quantifiers") {
  CHECK(drop_quantifiers(parse_mill("forall X. n(5,X) -o np(4,X)")) == parse_mill("n -o np"));
  CHECK(drop_quantifiers(parse_mill("a")) == parse_mill("a"));
  CHECK(drop_quantifiers(parse_mill("exists X. p(X) * q(X)")) == parse_mill("p * q"));
}

TEST_CASE("vacuous quantifiers are removed") {
  CHECK(remove_vacuous_quantifiers(parse_mill("forall X Y. p(X)")).str() == "forall X. p(X)");
  CHECK(remove_vacuous_quantifiers(parse_mill("exists X. q")) == parse_mill("q"));
}

namespace {

std::string random_lambek(std::mt19937& rng, int depth) {
  if (depth >= 3 || rng() % 3 == 0) return std::string(1, static_cast<char>('a' + rng() % 3));
  static const char* ops[] = {"*", "\\", "/"};
  return "(" + random_lambek(rng, depth + 1) + " " + ops[rng() % 3] + " " + random_lambek(rng, depth + 1) + ")";
}

// Two-position Lambek translation, written out separately.
MillFormula lambek(const DFormula& f, const Term& l, const Term& r) {
  switch (f.kind()) {
    case DFormula::Kind::Atom: return MillFormula::atom(f.name(), {l, r});
    case DFormula::Kind::Bullet: {
      Term x = fresh_var("X");
      return MillFormula::exists(x, MillFormula::tensor(lambek(f.left(), l, x), lambek(f.right(), x, r)));
    }
    case DFormula::Kind::Under: {
      Term x = fresh_var("X");
      return MillFormula::forall(x, MillFormula::lolli(lambek(f.left(), x, l), lambek(f.right(), x, r)));
    }
    default: {
      Term x = fresh_var("X");
      return MillFormula::forall(x, MillFormula::lolli(lambek(f.right(), r, x), lambek(f.left(), l, x)));
    }
  }
}

bool contains_only(const std::set<VarId>& inner, const std::set<VarId>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

TEST_CASE("Lambek fidelity and free variable containment") {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    const DFormula d = parse_d(random_lambek(rng, 0));
    const Term l = fresh_var("L"), r = fresh_var("R");
    const MillFormula f = translate_d(d, {l, r}, {});
    CHECK_MESSAGE(alpha_equivalent(f, lambek(d, l, r)), d.str());
    CHECK(contains_only(free_vars(f), {l.var_id(), r.var_id()}));
    const auto ids = binder_ids(f);
    CHECK(std::set<VarId>(ids.begin(), ids.end()).size() == ids.size());
  }
}

namespace {

bool has_kind(const ProofFrame& f, LinkKind k) {
  return std::any_of(f.links.begin(), f.links.end(), [&](const Link& l) { return l.kind == k; });
}

}  // namespace

TEST_CASE("quantifier polarity discipline") {
  // As a hypothesis, the universals of implications instantiate (solid) and
  // the existentials of products open eigenvariables (dotted); as a goal the
  // other way round.
  const auto pos = ints({0, 1});
  const MillFormula impl = tr("a \\ b", pos), prod = tr("a * b", pos);
  const ProofFrame goal_impl = unfold({}, impl), goal_prod = unfold({}, prod);
  CHECK(has_kind(goal_impl, LinkKind::Universal));
  CHECK_FALSE(has_kind(goal_impl, LinkKind::Existential));
  CHECK(has_kind(goal_prod, LinkKind::Existential));
  CHECK_FALSE(has_kind(goal_prod, LinkKind::Universal));
  const ProofFrame hyp = unfold({impl, prod}, parse_mill("c"));
  CHECK(hyp.links.size() == 4);
  CHECK(has_kind(hyp, LinkKind::Existential));  // from the implication
  CHECK(has_kind(hyp, LinkKind::Universal));    // from the product
}

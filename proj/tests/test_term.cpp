#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <set>
#include <thread>

#include "mill1/term.hpp"

using namespace mill1;

namespace {

Term C(const char* name) { return Term::constant(name); }
Term I(long long v) { return Term::integer(v); }
Term S(Term t) { return Term::app("s", {std::move(t)}); }
Term F(Term a, Term b) { return Term::app("f", {std::move(a), std::move(b)}); }

}  // namespace

TEST_CASE("unify binds a variable to a constant") {
  Term x = fresh_var("X");
  auto s = unify(x, I(5), {});
  REQUIRE(s);
  CHECK(s->apply(x) == I(5));
  CHECK(s->size() == 1);
}

TEST_CASE("unify decomposes applications") {
  Term x = fresh_var("X");
  auto s = unify(S(x), S(I(0)), {});
  REQUIRE(s);
  CHECK(s->apply(x) == I(0));
}

TEST_CASE("occurs check") {
  Term x = fresh_var("X");
  CHECK_FALSE(unify(x, S(x), {}));
  Term y = fresh_var("Y");
  CHECK_FALSE(unify(F(x, y), F(y, S(x)), {}));
}

TEST_CASE("unify position pairs") {
  Term x1 = fresh_var("X1"), x2 = fresh_var("X2");
  std::vector<Term> a{x1, x2}, b{I(1), I(2)};
  auto s = unify_all(a, b, {});
  REQUIRE(s);
  CHECK(s->apply(x1) == I(1));
  CHECK(s->apply(x2) == I(2));
}

TEST_CASE("clashes fail and leave the input alone") {
  Term x = fresh_var("X");
  Substitution base;
  REQUIRE(base.bind(x.var_id(), I(1)));
  CHECK_FALSE(unify(x, I(2), base));
  CHECK_FALSE(unify(S(I(0)), F(I(0), I(0)), base));
  CHECK_FALSE(unify(C("nom"), C("acc"), base));
  CHECK(base.size() == 1);
  CHECK(base.apply(x) == I(1));
}

TEST_CASE("rigid variables unify only with themselves") {
  Term e = fresh_var("E", true), x = fresh_var("X");
  CHECK(unify(e, e, {}));
  CHECK_FALSE(unify(e, I(3), {}));
  CHECK_FALSE(unify(e, fresh_var("F", true), {}));
  auto s = unify(x, e, {});
  REQUIRE(s);
  CHECK(s->apply(x) == e);
}

TEST_CASE("apply follows chains to a fixpoint") {
  Term x = fresh_var("X"), y = fresh_var("Y");
  Substitution s;
  REQUIRE(s.bind(x.var_id(), y));
  REQUIRE(s.bind(y.var_id(), I(3)));
  CHECK(s.apply(x) == I(3));
  CHECK(s.apply(s.apply(S(x))) == s.apply(S(x)));
  CHECK(Substitution{}.apply(F(x, y)) == F(x, y));
  Term z = fresh_var("Z");
  CHECK_FALSE(s.bind(z.var_id(), S(z)));
}

TEST_CASE("fresh variables are distinct") {
  Term a = fresh_var("x"), b = fresh_var("x");
  CHECK(a != b);
  CHECK(a.name() == b.name());
  std::set<VarId> ids;
  for (int i = 0; i < 1000; ++i) ids.insert(fresh_var("v").var_id());
  CHECK(ids.size() == 1000);
}

TEST_CASE("fresh variables are distinct across threads") {
  std::vector<std::vector<VarId>> got(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (int i = 0; i < 2000; ++i) got[static_cast<std::size_t>(t)].push_back(fresh_id());
    });
  for (auto& w : workers) w.join();
  std::set<VarId> all;
  for (const auto& v : got) all.insert(v.begin(), v.end());
  CHECK(all.size() == 8000);
}

// Most generality against brute force over a finite universe of ground terms:
// every ground unifier must factor through the mgu.
TEST_CASE("unify is most general on random small terms") {
  std::mt19937 rng(11);
  const std::vector<Term> vars{fresh_var("X"), fresh_var("Y"), fresh_var("Z")};
  const std::vector<Term> universe{C("a"), C("b"), S(C("a")), S(C("b")), S(S(C("a"))),
                                   F(C("a"), C("b")), F(C("b"), C("b")), F(S(C("a")), C("a"))};
  std::function<Term(int)> gen = [&](int depth) -> Term {
    const int pick = static_cast<int>(rng() % (depth > 1 ? 4 : 7));
    if (pick < 3) return pick < 2 ? vars[rng() % 3] : (rng() % 2 ? C("a") : C("b"));
    if (pick == 3) return vars[rng() % 3];
    if (pick < 6) return S(gen(depth + 1));
    return F(gen(depth + 1), gen(depth + 1));
  };
  int unified = 0;
  for (int round = 0; round < 300; ++round) {
    const Term t1 = gen(0), t2 = gen(0);
    const auto mgu = unify(t1, t2, {});
    if (mgu) {
      ++unified;
      CHECK(mgu->apply(t1) == mgu->apply(t2));
      for (const Term& v : vars) CHECK(mgu->apply(mgu->apply(v)) == mgu->apply(v));
    }
    for (const Term& a : universe)
      for (const Term& b : universe)
        for (const Term& c : universe) {
          Substitution g;
          g.bind(vars[0].var_id(), a);
          g.bind(vars[1].var_id(), b);
          g.bind(vars[2].var_id(), c);
          if (g.apply(t1) != g.apply(t2)) continue;
          REQUIRE(mgu);
          for (const Term& v : vars) CHECK(g.apply(mgu->apply(v)) == g.apply(v));
        }
  }
  CHECK(unified > 20);
}

TEST_CASE("printing") {
  CHECK(S(S(I(0))).str() == "s(s(0))");
  CHECK(F(C("nom"), I(4)).str() == "f(nom,4)");
}

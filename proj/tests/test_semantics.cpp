#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "mill1/grammar.hpp"
#include "mill1/oracle.hpp"
#include "mill1/prover.hpp"
#include "mill1/semantics.hpp"
#include "mill1/translate.hpp"

using namespace mill1;

namespace {

const std::string kData = MILL1_DATA_DIR;

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

std::map<std::string, MillFormula> env(const std::vector<MillFormula>& ant) {
  std::map<std::string, MillFormula> out;
  for (std::size_t i = 0; i < ant.size(); ++i) out["c" + std::to_string(i)] = drop_quantifiers(ant[i]);
  return out;
}

// Type of the term read off a net, checked against its own conclusions.
std::optional<MillFormula> term_type(const ProofStructure& net, std::string* why = nullptr) {
  const auto concl = net.conclusion_formulas();
  const std::vector<MillFormula> ant(concl.begin(), concl.end() - 1);
  const LambdaTerm t = lambda_term(sequentialize(net), names(ant.size()));
  return linear_type(t, env(ant), why);
}

int count(const NDProof& p, NDProof::Rule r) {
  int n = p.rule == r;
  for (const auto& q : p.premisses) n += count(q, r);
  return n;
}

}  // namespace

TEST_CASE("axiom") {
  const ProofStructure net = first_net({parse_mill("a")}, parse_mill("a"));
  const NDProof nd = sequentialize(net);
  CHECK(nd.rule == NDProof::Rule::Hyp);
  CHECK(nd.hyp == 0);
  CHECK(nd.size() == 1);
  CHECK(lambda_term(nd, {"x"}).str() == "x");
}

TEST_CASE("application") {
  const Sequent s = parse_sequent("forall X. b(X) -o a(X), b(c) |- a(c)");
  const ProofStructure net = first_net(s.antecedent, s.succedent);
  const NDProof nd = sequentialize(net);
  CHECK(nd.rule == NDProof::Rule::LolliE);
  CHECK(nd.formula == parse_mill("a"));
  CHECK(nd.size() == 3);
  const LambdaTerm t = lambda_term(nd, {"f", "y"});
  CHECK(t.kind() == LambdaTerm::Kind::App);
  CHECK(t.str() == "f y");
}

TEST_CASE("abstraction and pairs") {
  const ProofStructure comp = first_net({parse_mill("a -o b"), parse_mill("b -o c")}, parse_mill("a -o c"));
  const NDProof nd = sequentialize(comp);
  CHECK(nd.rule == NDProof::Rule::LolliI);
  CHECK(count(nd, NDProof::Rule::LolliE) == 2);
  CHECK(term_type(comp) == parse_mill("a -o c"));

  const ProofStructure swap = first_net({parse_mill("a * b")}, parse_mill("b * a"));
  const NDProof sw = sequentialize(swap);
  CHECK(count(sw, NDProof::Rule::TensorE) == 1);
  CHECK(count(sw, NDProof::Rule::TensorI) == 1);
  CHECK(term_type(swap) == parse_mill("b * a"));
  CHECK(lambda_term(sw, {"p"}).kind() == LambdaTerm::Kind::LetPair);
}

TEST_CASE("nets with cuts are refused") {
  const ProofStructure id = first_net({parse_mill("a")}, parse_mill("a"));
  CHECK_THROWS_AS(sequentialize(compose_cut(id, id, 0)), std::logic_error);
}

TEST_CASE("linear type checking") {
  const MillFormula a = parse_mill("a"), ab = parse_mill("a -o b");
  const std::map<std::string, MillFormula> consts{{"f", ab}, {"x", a}};
  const LambdaTerm fx = LambdaTerm::app(LambdaTerm::constant("f"), LambdaTerm::constant("x"));
  CHECK(linear_type(fx, consts) == parse_mill("b"));

  std::string why;
  // x used twice
  const LambdaTerm dup = LambdaTerm::pair(LambdaTerm::constant("x"), LambdaTerm::constant("x"));
  CHECK_FALSE(linear_type(dup, {{"x", a}}, &why));
  CHECK_FALSE(why.empty());
  // f unused
  CHECK_FALSE(linear_type(LambdaTerm::constant("x"), consts));
  // vacuous abstraction
  const LambdaTerm vac = LambdaTerm::lam("y", a, LambdaTerm::constant("x"));
  CHECK_FALSE(linear_type(vac, {{"x", a}}));
  // argument of the wrong type
  CHECK_FALSE(linear_type(LambdaTerm::app(LambdaTerm::constant("f"), LambdaTerm::constant("f")), {{"f", ab}}));
  // identity is fine
  const LambdaTerm id = LambdaTerm::lam("y", a, LambdaTerm::var("y"));
  CHECK(linear_type(id, {}) == parse_mill("a -o a"));
  // let-pair must use both components
  const LambdaTerm let =
      LambdaTerm::let_pair("u", "v", LambdaTerm::constant("p"), LambdaTerm::pair(LambdaTerm::var("v"), LambdaTerm::var("u")));
  CHECK(linear_type(let, {{"p", parse_mill("a * b")}}) == parse_mill("b * a"));
  const LambdaTerm drop = LambdaTerm::let_pair("u", "v", LambdaTerm::constant("p"), LambdaTerm::var("u"));
  CHECK_FALSE(linear_type(drop, {{"p", parse_mill("a * b")}}));
}

TEST_CASE("terms of derivable sequents are linear and well typed") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Sequent s = random_derivable_sequent(rng, 2 + 2 * (i % 5));
    const ProveResult r = prove(s.antecedent, s.succedent);
    REQUIRE_MESSAGE(!r.proofs.empty(), sequent_str(s));
    for (const auto& net : r.proofs) {
      const LambdaTerm t = lambda_term(sequentialize(net), names(s.antecedent.size()));
      std::string why;
      const auto ty = linear_type(t, env(s.antecedent), &why);
      CHECK_MESSAGE(ty, sequent_str(s) << ": " << why);
      if (ty) CHECK_MESSAGE(*ty == drop_quantifiers(s.succedent), sequent_str(s));
    }
  }
}

TEST_CASE("term type survives cut elimination") {
  Rng rng(11);
  for (int round = 0; round < 40; ++round) {
    const ProofStructure cut = random_cut_composition(rng, round);
    const ProofStructure out = eliminate_cut(cut);
    const MillFormula goal = cut.conclusion_formulas().back();
    std::string why;
    const auto ty = term_type(out, &why);
    CHECK_MESSAGE(ty, why);
    if (ty) CHECK(*ty == drop_quantifiers(goal));
  }
}

TEST_CASE("the elliptical sentence") {
  const Lexicon a = load_lexicon(kData + "/ellipsis.lex");
  const ParseResult r = parse(a, make_sentence("John left before Mary did", 0), "s");
  REQUIRE(r.readings.size() == 1);
  const Reading& rd = r.readings.front();
  REQUIRE(rd.term);
  REQUIRE(rd.term_type);
  CHECK(*rd.term_type == parse_mill("s"));
  const std::string text = rd.term->str();
  CHECK(text.rfind("did_0", 0) == 0);
  CHECK(text.find("before_0") != std::string::npos);
  CHECK(text.find("John_0") != std::string::npos);

  // The head is did applied to three arguments.
  const LambdaTerm* t = &*rd.term;
  int args = 0;
  while (t->kind() == LambdaTerm::Kind::App) {
    t = &t->left();
    ++args;
  }
  CHECK(args == 3);
  CHECK(t->kind() == LambdaTerm::Kind::Const);
  CHECK(t->name() == "did_0");
}

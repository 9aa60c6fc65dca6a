#include "mill1/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "mill1/prover.hpp"

namespace mill1 {

namespace {

struct PredSpec {
  const char* name;
  int arity;
};

constexpr PredSpec kPreds[] = {{"p", 1}, {"q", 2}, {"r", 0}};
const char* const kConstants[] = {"a", "b", "c"};

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Term replace_const(const Term& t, const std::string& c, const Term& by) {
  if (t.is_const()) return t.name() == c ? by : t;
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(replace_const(a, c, by));
  return Term::app(t.name(), std::move(args));
}

void collect_constants(const Term& t, std::vector<std::string>& out) {
  if (t.is_const()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
  } else if (t.is_app()) {
    for (const Term& a : t.args()) collect_constants(a, out);
  }
}

bool mentions(const MillFormula& f, const std::string& c) {
  auto cs = constants_of(f);
  return std::find(cs.begin(), cs.end(), c) != cs.end();
}

MillFormula ground_atom(Rng& rng) {
  const PredSpec& p = kPreds[uniform(rng, 0, 2)];
  std::vector<Term> args;
  for (int i = 0; i < p.arity; ++i) args.push_back(Term::constant(kConstants[uniform(rng, 0, 2)]));
  return MillFormula::atom(p.name, std::move(args));
}

MillFormula random_atom(Rng& rng, const std::vector<Term>& scope) {
  const PredSpec& p = kPreds[uniform(rng, 0, 2)];
  std::vector<Term> args;
  for (int i = 0; i < p.arity; ++i) {
    const int n = static_cast<int>(scope.size());
    const int k = uniform(rng, 0, n + 1);
    args.push_back(k < n ? scope[static_cast<std::size_t>(k)]
                         : Term::constant(kConstants[k - n]));
  }
  return MillFormula::atom(p.name, std::move(args));
}

MillFormula random_formula_rec(Rng& rng, const RandomConfig& cfg, int literals, int depth,
                               std::vector<Term>& scope) {
  if (literals <= 1 || depth >= cfg.max_depth) {
    if (literals <= 1 || !chance(rng, cfg.quantifier_rate) || depth >= cfg.max_depth + 2)
      return random_atom(rng, scope);
  }
  if (chance(rng, cfg.quantifier_rate)) {
    Term v = fresh_var("X");
    scope.push_back(v);
    MillFormula body = random_formula_rec(rng, cfg, literals, depth + 1, scope);
    scope.pop_back();
    return chance(rng, 0.5) ? MillFormula::forall(v, body) : MillFormula::exists(v, body);
  }
  const int left = uniform(rng, 1, literals - 1);
  MillFormula a = random_formula_rec(rng, cfg, left, depth + 1, scope);
  MillFormula b = random_formula_rec(rng, cfg, literals - left, depth + 1, scope);
  return chance(rng, 0.5) ? MillFormula::tensor(a, b) : MillFormula::lolli(a, b);
}

bool balanced(const ProofFrame& f) {
  std::map<std::pair<std::string, std::size_t>, int> count;
  for (const Literal& l : f.literals)
    count[{l.pred, l.args.size()}] += l.polarity == Polarity::Positive ? 1 : -1;
  return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
}

bool compatible(const Literal& a, const Literal& b) {
  return a.polarity != b.polarity && a.pred == b.pred && a.args.size() == b.args.size();
}

// Adds one quantifier by abstracting a constant, following a sound
// sequent rule (right/left introduction of forall or exists).
void quantify(Rng& rng, Sequent& s) {
  const int rule = uniform(rng, 0, 3);
  Term x = fresh_var("X");
  if (rule == 0 || rule == 1) {
    auto cs = constants_of(s.succedent);
    if (cs.empty()) return;
    const std::string c = cs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cs.size()) - 1))];
    if (rule == 0) {
      // forall right: c must not occur in the antecedent.
      for (const auto& h : s.antecedent)
        if (mentions(h, c)) return;
      s.succedent = MillFormula::forall(x, abstract_constant(s.succedent, c, x));
    } else {
      s.succedent = MillFormula::exists(x, abstract_constant(s.succedent, c, x));
    }
    return;
  }
  if (s.antecedent.empty()) return;
  const std::size_t i =
      static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(s.antecedent.size()) - 1));
  auto cs = constants_of(s.antecedent[i]);
  if (cs.empty()) return;
  const std::string c = cs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cs.size()) - 1))];
  if (rule == 2) {
    s.antecedent[i] = MillFormula::forall(x, abstract_constant(s.antecedent[i], c, x));
  } else {
    // exists left: c must not occur elsewhere.
    if (mentions(s.succedent, c)) return;
    for (std::size_t j = 0; j < s.antecedent.size(); ++j)
      if (j != i && mentions(s.antecedent[j], c)) return;
    s.antecedent[i] = MillFormula::exists(x, abstract_constant(s.antecedent[i], c, x));
  }
}

Sequent derivable(Rng& rng, int literals, int depth) {
  Sequent s;
  if (literals <= 2) {
    MillFormula a = ground_atom(rng);
    s.antecedent = {a};
    s.succedent = a;
  } else {
    const int rule = depth >= 4 ? uniform(rng, 0, 1) : uniform(rng, 0, 3);
    if (rule <= 1) {
      const int l1 = 2 * uniform(rng, 1, literals / 2 - 1);
      Sequent a = derivable(rng, l1, depth + 1);
      Sequent b = derivable(rng, literals - l1, depth + 1);
      if (rule == 0 || b.antecedent.empty()) {
        s.antecedent = a.antecedent;
        s.antecedent.insert(s.antecedent.end(), b.antecedent.begin(), b.antecedent.end());
        s.succedent = MillFormula::tensor(a.succedent, b.succedent);
      } else {
        const std::size_t j =
            static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(b.antecedent.size()) - 1));
        MillFormula hyp = MillFormula::lolli(a.succedent, b.antecedent[j]);
        b.antecedent.erase(b.antecedent.begin() + static_cast<std::ptrdiff_t>(j));
        s.antecedent = a.antecedent;
        s.antecedent.insert(s.antecedent.end(), b.antecedent.begin(), b.antecedent.end());
        s.antecedent.push_back(hyp);
        s.succedent = b.succedent;
      }
    } else {
      s = derivable(rng, literals, depth + 1);
      if (rule == 2 && !s.antecedent.empty()) {
        const std::size_t i =
            static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(s.antecedent.size()) - 1));
        s.succedent = MillFormula::lolli(s.antecedent[i], s.succedent);
        s.antecedent.erase(s.antecedent.begin() + static_cast<std::ptrdiff_t>(i));
      } else if (rule == 3 && s.antecedent.size() >= 2) {
        const int n = static_cast<int>(s.antecedent.size());
        const std::size_t i = static_cast<std::size_t>(uniform(rng, 0, n - 2));
        const std::size_t j = static_cast<std::size_t>(uniform(rng, static_cast<int>(i) + 1, n - 1));
        s.antecedent[i] = MillFormula::tensor(s.antecedent[i], s.antecedent[j]);
        s.antecedent.erase(s.antecedent.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
  }
  while (chance(rng, 0.35)) quantify(rng, s);
  return s;
}

}  // namespace

int literal_count(const MillFormula& f) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: return 1;
    case MillFormula::Kind::Tensor:
    case MillFormula::Kind::Lolli: return literal_count(f.left()) + literal_count(f.right());
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: return literal_count(f.body());
  }
  return 0;
}

int literal_count(const Sequent& s) {
  int n = literal_count(s.succedent);
  for (const auto& a : s.antecedent) n += literal_count(a);
  return n;
}

MillFormula abstract_constant(const MillFormula& f, const std::string& c, const Term& t) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: {
      std::vector<Term> args;
      for (const Term& a : f.args()) args.push_back(replace_const(a, c, t));
      return MillFormula::atom(f.pred(), std::move(args));
    }
    case MillFormula::Kind::Tensor:
      return MillFormula::tensor(abstract_constant(f.left(), c, t), abstract_constant(f.right(), c, t));
    case MillFormula::Kind::Lolli:
      return MillFormula::lolli(abstract_constant(f.left(), c, t), abstract_constant(f.right(), c, t));
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists:
      return MillFormula::quantifier(f.kind(), f.var(), abstract_constant(f.body(), c, t));
  }
  return f;
}

std::vector<std::string> constants_of(const MillFormula& f) {
  std::vector<std::string> out;
  std::function<void(const MillFormula&)> walk = [&](const MillFormula& g) {
    switch (g.kind()) {
      case MillFormula::Kind::Atom:
        for (const Term& a : g.args()) collect_constants(a, out);
        return;
      case MillFormula::Kind::Tensor:
      case MillFormula::Kind::Lolli:
        walk(g.left());
        walk(g.right());
        return;
      case MillFormula::Kind::Forall:
      case MillFormula::Kind::Exists:
        walk(g.body());
        return;
    }
  };
  walk(f);
  return out;
}

MillFormula random_formula(Rng& rng, const RandomConfig& cfg, int literals) {
  std::vector<Term> scope;
  return random_formula_rec(rng, cfg, std::max(1, literals), 0, scope);
}

namespace {

Sequent random_sequent_of_size(Rng& rng, const RandomConfig& cfg, int total) {
  for (;;) {
    const int formulas = uniform(rng, 1, std::min(total, cfg.max_antecedents + 1));
    std::vector<int> sizes(static_cast<std::size_t>(formulas), 1);
    for (int extra = total - formulas; extra > 0; --extra)
      ++sizes[static_cast<std::size_t>(uniform(rng, 0, formulas - 1))];
    Sequent s;
    for (int i = 0; i + 1 < formulas; ++i)
      s.antecedent.push_back(random_formula(rng, cfg, sizes[static_cast<std::size_t>(i)]));
    s.succedent = random_formula(rng, cfg, sizes.back());
    if (balanced(unfold(s.antecedent, s.succedent))) return s;
  }
}

}  // namespace

// The size is drawn before rejection sampling, otherwise balance would
// favour the smallest sequents.
Sequent random_sequent(Rng& rng, const RandomConfig& cfg) {
  return random_sequent_of_size(rng, cfg, 2 * uniform(rng, 1, std::max(1, cfg.max_literals / 2)));
}

Sequent random_derivable_sequent(Rng& rng, int literals) {
  Sequent s = derivable(rng, std::max(2, literals - literals % 2), 0);
  std::shuffle(s.antecedent.begin(), s.antecedent.end(), rng);
  return s;
}

std::optional<ProofStructure> random_structure(Rng& rng, const RandomConfig& cfg, int max_async) {
  const int total = 2 * uniform(rng, 1, std::max(1, cfg.max_literals / 2));
  for (int attempt = 0; attempt < 50; ++attempt) {
    Sequent s = random_sequent_of_size(rng, cfg, total);
    ProofFrame f = unfold(s.antecedent, s.succedent);
    if (f.async_link_count() > max_async) continue;
    std::vector<int> neg, pos;
    for (std::size_t i = 0; i < f.literals.size(); ++i)
      (f.literals[i].polarity == Polarity::Negative ? neg : pos).push_back(static_cast<int>(i));
    for (int tries = 0; tries < 20; ++tries) {
      std::shuffle(pos.begin(), pos.end(), rng);
      Matching m;
      std::vector<bool> used(pos.size(), false);
      bool ok = true;
      for (int n : neg) {
        bool found = false;
        for (std::size_t j = 0; j < pos.size() && !found; ++j) {
          if (used[j] || !compatible(f.literals[static_cast<std::size_t>(n)],
                                     f.literals[static_cast<std::size_t>(pos[j])]))
            continue;
          used[j] = true;
          m.emplace_back(n, pos[j]);
          found = true;
        }
        ok = ok && found;
      }
      if (!ok) break;
      Substitution sub;
      for (const auto& [a, b] : m) {
        auto u = unify_all(f.literals[static_cast<std::size_t>(a)].args,
                           f.literals[static_cast<std::size_t>(b)].args, sub);
        if (!u) {
          ok = false;
          break;
        }
        sub = std::move(*u);
      }
      if (ok) return ProofStructure{f, normalize_matching(std::move(m)), std::move(sub)};
    }
  }
  return std::nullopt;
}

std::vector<Matching> all_matchings(const ProofFrame& frame) {
  std::vector<int> neg, pos;
  for (std::size_t i = 0; i < frame.literals.size(); ++i)
    (frame.literals[i].polarity == Polarity::Negative ? neg : pos).push_back(static_cast<int>(i));
  std::vector<Matching> out;
  if (neg.size() != pos.size()) return out;
  std::vector<bool> used(pos.size(), false);
  Matching cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == neg.size()) {
      out.push_back(normalize_matching(cur));
      return;
    }
    const Literal& a = frame.literals[static_cast<std::size_t>(neg[i])];
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (used[j] || !compatible(a, frame.literals[static_cast<std::size_t>(pos[j])])) continue;
      used[j] = true;
      cur.emplace_back(neg[i], pos[j]);
      rec(i + 1);
      cur.pop_back();
      used[j] = false;
    }
  };
  rec(0);
  return out;
}

std::vector<Matching> brute_force_nets(const ProofFrame& frame) {
  std::vector<Matching> out;
  for (const Matching& m : all_matchings(frame)) {
    MatchResult r = axiom_match(frame, m);
    if (r.structure && check_switchings(*r.structure)) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProofStructure first_net(const std::vector<MillFormula>& antecedent, const MillFormula& goal) {
  ProveOptions o;
  o.limit = 1;
  ProveResult r = prove(antecedent, goal, o);
  if (r.proofs.empty()) throw std::logic_error("sequent is not derivable");
  return r.proofs.front();
}

ProofStructure random_cut_composition(Rng& rng, int round) {
  const Sequent s = random_derivable_sequent(rng, 2 + 2 * (round % 3));
  const ProofStructure net = first_net(s.antecedent, s.succedent);
  const MillFormula& a = s.succedent;
  switch (round % 4) {
    case 1: {
      const Sequent t = random_derivable_sequent(rng, 2);
      std::vector<MillFormula> ant{a};
      ant.insert(ant.end(), t.antecedent.begin(), t.antecedent.end());
      return compose_cut(net, first_net(ant, MillFormula::tensor(a, t.succedent)), 0);
    }
    case 2: {
      const MillFormula b = MillFormula::atom("r");
      return compose_cut(net, first_net({a, MillFormula::lolli(a, b)}, b), 0);
    }
    case 3:
      if (!s.antecedent.empty()) {
        const MillFormula& h = s.antecedent.front();
        return compose_cut(first_net({h}, h), net, 0);
      }
      [[fallthrough]];
    default:
      return compose_cut(net, first_net({a}, a), 0);
  }
}

}  // namespace mill1

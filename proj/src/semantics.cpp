#include "mill1/semantics.hpp"

#include <deque>
#include <stdexcept>

#include "mill1/translate.hpp"

namespace mill1 {

std::size_t NDProof::size() const {
  std::size_t n = 1;
  for (const NDProof& p : premisses) n += p.size();
  return n;
}

namespace {

NDProof leaf(int hyp, MillFormula f) {
  NDProof p;
  p.rule = NDProof::Rule::Hyp;
  p.formula = std::move(f);
  p.hyp = hyp;
  return p;
}

class Sequentializer {
 public:
  explicit Sequentializer(const ProofStructure& ps) : f_(ps.frame) {
    const std::size_t n = f_.nodes.size();
    adj_.resize(n);
    partner_.assign(n, -1);
    for (const Link& l : f_.links) {
      if (!l.alive) continue;
      if (l.kind == LinkKind::Cut) throw std::logic_error("sequentialize: structure has cuts");
      if (l.kind != LinkKind::Tensor && l.kind != LinkKind::Par) continue;
      const int c = l.conclusions[0];
      for (int p : l.premisses) connect(c, core(p));
    }
    for (const auto& [a, b] : ps.matching) {
      const int na = f_.literals[static_cast<std::size_t>(a)].node;
      const int nb = f_.literals[static_cast<std::size_t>(b)].node;
      connect(na, nb);
      partner_[static_cast<std::size_t>(na)] = nb;
      partner_[static_cast<std::size_t>(nb)] = na;
    }
    next_hyp_ = static_cast<int>(f_.conclusions.size()) - 1;
  }

  NDProof run() {
    std::vector<bool> all(f_.nodes.size(), false);
    for (std::size_t i = 0; i < f_.nodes.size(); ++i)
      if (f_.nodes[i].alive && core(static_cast<int>(i)) == static_cast<int>(i)) all[i] = true;
    std::vector<Hyp> hyps;
    for (std::size_t i = 0; i + 1 < f_.conclusions.size(); ++i) {
      const int c = core(f_.conclusions[i]);
      hyps.push_back({c, leaf(static_cast<int>(i), erased(c))});
    }
    return seq(all, std::move(hyps), core(f_.conclusions.back()));
  }

 private:
  struct Hyp {
    int node;
    NDProof proof;
  };

  const FrameNode& node(int n) const { return f_.nodes[static_cast<std::size_t>(n)]; }

  const Link* producer(int n) const {
    const int p = node(n).producer;
    return p < 0 ? nullptr : &f_.links[static_cast<std::size_t>(p)];
  }

  // Skips quantifier links.
  int core(int n) const {
    for (const Link* l = producer(n);
         l && (l->kind == LinkKind::Universal || l->kind == LinkKind::Existential);
         l = producer(n))
      n = l->premisses[0];
    return n;
  }

  MillFormula erased(int n) const { return drop_quantifiers(node(n).formula); }

  void connect(int a, int b) {
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
  }

  std::vector<int> components(const std::vector<bool>& in, int& count) const {
    std::vector<int> comp(in.size(), -1);
    count = 0;
    for (std::size_t s = 0; s < in.size(); ++s) {
      if (!in[s] || comp[s] >= 0) continue;
      std::deque<int> queue{static_cast<int>(s)};
      comp[s] = count;
      while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : adj_[static_cast<std::size_t>(v)]) {
          if (!in[static_cast<std::size_t>(w)] || comp[static_cast<std::size_t>(w)] >= 0) continue;
          comp[static_cast<std::size_t>(w)] = count;
          queue.push_back(w);
        }
      }
      ++count;
    }
    return comp;
  }

  // Tries to split at the tensor link with conclusion c. On success fills
  // the two node sets.
  bool split(const std::vector<bool>& in, int c, int a, int b, std::vector<bool>& in_a,
             std::vector<bool>& in_b) const {
    std::vector<bool> rest = in;
    rest[static_cast<std::size_t>(c)] = false;
    int count = 0;
    std::vector<int> comp = components(rest, count);
    if (count != 2) return false;
    const int ca = comp[static_cast<std::size_t>(a)], cb = comp[static_cast<std::size_t>(b)];
    if (ca == cb) return false;
    in_a.assign(in.size(), false);
    in_b.assign(in.size(), false);
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (comp[i] == ca) in_a[i] = true;
      else if (comp[i] == cb) in_b[i] = true;
    }
    return true;
  }

  NDProof seq(std::vector<bool> in, std::vector<Hyp> hyps, int goal) {
    if (const Link* l = producer(goal); l && l->kind == LinkKind::Par) {
      const int a = core(l->premisses[0]), b = core(l->premisses[1]);
      const int idx = next_hyp_++;
      in[static_cast<std::size_t>(goal)] = false;
      hyps.push_back({a, leaf(idx, erased(a))});
      NDProof p;
      p.rule = NDProof::Rule::LolliI;
      p.formula = erased(goal);
      p.hyp = idx;
      p.premisses.push_back(seq(std::move(in), std::move(hyps), b));
      return p;
    }
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      const Link* l = producer(hyps[i].node);
      if (!l || l->kind != LinkKind::Par) continue;
      const int a = core(l->premisses[0]), b = core(l->premisses[1]);
      const int idx = next_hyp_;
      next_hyp_ += 2;
      in[static_cast<std::size_t>(hyps[i].node)] = false;
      NDProof bound = std::move(hyps[i].proof);
      hyps.erase(hyps.begin() + static_cast<std::ptrdiff_t>(i));
      hyps.push_back({a, leaf(idx, erased(a))});
      hyps.push_back({b, leaf(idx + 1, erased(b))});
      NDProof body = seq(std::move(in), std::move(hyps), goal);
      NDProof p;
      p.rule = NDProof::Rule::TensorE;
      p.formula = body.formula;
      p.hyp = idx;
      p.premisses.push_back(std::move(bound));
      p.premisses.push_back(std::move(body));
      return p;
    }
    if (node(goal).literal >= 0 && hyps.size() == 1 &&
        partner_[static_cast<std::size_t>(goal)] == hyps[0].node)
      return std::move(hyps[0].proof);

    std::vector<bool> in_a, in_b;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      const Link* l = producer(hyps[i].node);
      if (!l || l->kind != LinkKind::Tensor) continue;
      const int a = core(l->premisses[0]), b = core(l->premisses[1]);
      if (!split(in, hyps[i].node, a, b, in_a, in_b)) continue;
      if (!in_b[static_cast<std::size_t>(goal)]) continue;
      std::vector<Hyp> ha, hb;
      NDProof fn = std::move(hyps[i].proof);
      for (std::size_t j = 0; j < hyps.size(); ++j) {
        if (j == i) continue;
        (in_a[static_cast<std::size_t>(hyps[j].node)] ? ha : hb).push_back(std::move(hyps[j]));
      }
      NDProof app;
      app.rule = NDProof::Rule::LolliE;
      app.formula = erased(b);
      app.premisses.push_back(std::move(fn));
      app.premisses.push_back(seq(std::move(in_a), std::move(ha), a));
      hb.push_back({b, std::move(app)});
      return seq(std::move(in_b), std::move(hb), goal);
    }
    if (const Link* l = producer(goal); l && l->kind == LinkKind::Tensor) {
      const int a = core(l->premisses[0]), b = core(l->premisses[1]);
      if (split(in, goal, a, b, in_a, in_b)) {
        std::vector<Hyp> ha, hb;
        for (Hyp& h : hyps) (in_a[static_cast<std::size_t>(h.node)] ? ha : hb).push_back(std::move(h));
        NDProof p;
        p.rule = NDProof::Rule::TensorI;
        p.formula = erased(goal);
        p.premisses.push_back(seq(std::move(in_a), std::move(ha), a));
        p.premisses.push_back(seq(std::move(in_b), std::move(hb), b));
        return p;
      }
    }
    throw std::logic_error("sequentialize: no splitting link found");
  }

  const ProofFrame& f_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> partner_;
  int next_hyp_ = 0;
};

}  // namespace

NDProof sequentialize(const ProofStructure& net) { return Sequentializer(net).run(); }

struct LambdaTerm::Node {
  Kind kind = Kind::Var;
  std::string name;
  std::string name2;
  MillFormula type;
  std::vector<LambdaTerm> kids;
};

LambdaTerm LambdaTerm::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->name = std::move(name);
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::app(LambdaTerm f, LambdaTerm a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->kids = {std::move(f), std::move(a)};
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::lam(std::string var, MillFormula type, LambdaTerm body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->name = std::move(var);
  n->type = std::move(type);
  n->kids = {std::move(body)};
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::pair(LambdaTerm a, LambdaTerm b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->kids = {std::move(a), std::move(b)};
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::let_pair(std::string x, std::string y, LambdaTerm bound, LambdaTerm body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LetPair;
  n->name = std::move(x);
  n->name2 = std::move(y);
  n->kids = {std::move(bound), std::move(body)};
  return LambdaTerm(std::move(n));
}

LambdaTerm::Kind LambdaTerm::kind() const { return node_->kind; }
const std::string& LambdaTerm::name() const { return node_->name; }
const std::string& LambdaTerm::name2() const { return node_->name2; }
const MillFormula& LambdaTerm::type() const { return node_->type; }
const LambdaTerm& LambdaTerm::left() const { return node_->kids.at(0); }
const LambdaTerm& LambdaTerm::right() const {
  return node_->kids.at(node_->kind == Kind::Lam ? 0 : 1);
}

namespace {

enum class Slot { Top, Function, Argument };

std::string print(const LambdaTerm& t, Slot slot, bool types) {
  using K = LambdaTerm::Kind;
  switch (t.kind()) {
    case K::Var:
    case K::Const: return t.name();
    case K::Pair:
      return "<" + print(t.left(), Slot::Top, types) + ", " + print(t.right(), Slot::Top, types) + ">";
    case K::App: {
      std::string s = print(t.left(), Slot::Function, types) + " " +
                      print(t.right(), Slot::Argument, types);
      return slot == Slot::Argument ? "(" + s + ")" : s;
    }
    case K::Lam: {
      std::string s = "λ" + t.name();
      if (types) s += ":" + t.type().str();
      s += ". " + print(t.left(), Slot::Top, types);
      return slot == Slot::Top ? s : "(" + s + ")";
    }
    case K::LetPair: {
      std::string s = "let <" + t.name() + ", " + t.name2() + "> = " +
                      print(t.left(), Slot::Top, types) + " in " +
                      print(t.right(), Slot::Top, types);
      return slot == Slot::Top ? s : "(" + s + ")";
    }
  }
  return "?";
}

LambdaTerm to_term(const NDProof& nd, const std::vector<std::string>& names) {
  auto hyp_name = [&](int i) { return "x" + std::to_string(i - static_cast<int>(names.size())); };
  switch (nd.rule) {
    case NDProof::Rule::Hyp:
      if (nd.hyp < static_cast<int>(names.size()))
        return LambdaTerm::constant(names[static_cast<std::size_t>(nd.hyp)]);
      return LambdaTerm::var(hyp_name(nd.hyp));
    case NDProof::Rule::LolliI:
      return LambdaTerm::lam(hyp_name(nd.hyp), nd.formula.left(), to_term(nd.premisses[0], names));
    case NDProof::Rule::LolliE:
      return LambdaTerm::app(to_term(nd.premisses[0], names), to_term(nd.premisses[1], names));
    case NDProof::Rule::TensorI:
      return LambdaTerm::pair(to_term(nd.premisses[0], names), to_term(nd.premisses[1], names));
    case NDProof::Rule::TensorE:
      return LambdaTerm::let_pair(hyp_name(nd.hyp), hyp_name(nd.hyp + 1),
                                  to_term(nd.premisses[0], names), to_term(nd.premisses[1], names));
  }
  return LambdaTerm::var("?");
}

class Checker {
 public:
  Checker(const std::map<std::string, MillFormula>& constants, std::string* why)
      : constants_(constants), why_(why) {}

  std::optional<MillFormula> check(const LambdaTerm& t) {
    using K = LambdaTerm::Kind;
    switch (t.kind()) {
      case K::Var: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->name != t.name()) continue;
          if (it->used) return fail("variable " + t.name() + " used twice");
          it->used = true;
          return it->type;
        }
        return fail("unbound variable " + t.name());
      }
      case K::Const: {
        auto it = constants_.find(t.name());
        if (it == constants_.end()) return fail("unknown constant " + t.name());
        if (used_constants_[t.name()]++) return fail("constant " + t.name() + " used twice");
        return it->second;
      }
      case K::App: {
        auto f = check(t.left());
        if (!f) return std::nullopt;
        auto a = check(t.right());
        if (!a) return std::nullopt;
        if (f->kind() != MillFormula::Kind::Lolli || f->left() != *a)
          return fail("cannot apply " + f->str() + " to " + a->str());
        return f->right();
      }
      case K::Lam: {
        scope_.push_back({t.name(), t.type(), false});
        auto b = check(t.left());
        if (!b) return std::nullopt;
        if (!scope_.back().used) return fail("variable " + t.name() + " unused");
        scope_.pop_back();
        return MillFormula::lolli(t.type(), *b);
      }
      case K::Pair: {
        auto a = check(t.left());
        if (!a) return std::nullopt;
        auto b = check(t.right());
        if (!b) return std::nullopt;
        return MillFormula::tensor(*a, *b);
      }
      case K::LetPair: {
        auto m = check(t.left());
        if (!m) return std::nullopt;
        if (m->kind() != MillFormula::Kind::Tensor) return fail("let on non-product " + m->str());
        scope_.push_back({t.name(), m->left(), false});
        scope_.push_back({t.name2(), m->right(), false});
        auto b = check(t.right());
        if (!b) return std::nullopt;
        if (!scope_.back().used || !scope_[scope_.size() - 2].used)
          return fail("let-bound variable unused");
        scope_.pop_back();
        scope_.pop_back();
        return b;
      }
    }
    return fail("bad term");
  }

  bool all_constants_used() {
    for (const auto& [name, type] : constants_)
      if (used_constants_[name] != 1) {
        fail("constant " + name + " unused");
        return false;
      }
    return true;
  }

 private:
  struct Binding {
    std::string name;
    MillFormula type;
    bool used;
  };

  std::nullopt_t fail(const std::string& msg) {
    if (why_ && why_->empty()) *why_ = msg;
    return std::nullopt;
  }

  const std::map<std::string, MillFormula>& constants_;
  std::string* why_;
  std::vector<Binding> scope_;
  std::map<std::string, int> used_constants_;
};

}  // namespace

std::string LambdaTerm::str(bool types) const { return print(*this, Slot::Top, types); }

LambdaTerm lambda_term(const NDProof& nd, const std::vector<std::string>& names) {
  return to_term(nd, names);
}

std::optional<MillFormula> linear_type(const LambdaTerm& t,
                                       const std::map<std::string, MillFormula>& constants,
                                       std::string* why) {
  Checker c(constants, why);
  auto type = c.check(t);
  if (!type || !c.all_constants_used()) return std::nullopt;
  return type;
}

}  // namespace mill1

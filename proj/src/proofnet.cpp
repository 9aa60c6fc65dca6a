#include "mill1/proofnet.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mill1 {

const char* link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Axiom: return "axiom";
    case LinkKind::Cut: return "cut";
    case LinkKind::Par: return "par";
    case LinkKind::Tensor: return "tensor";
    case LinkKind::Universal: return "universal";
    case LinkKind::Existential: return "existential";
  }
  return "?";
}

int ProofFrame::async_link_count() const {
  int n = 0;
  for (const Link& l : links)
    if (l.alive && is_asynchronous(l.kind)) ++n;
  return n;
}

std::string ProofFrame::literal_str(int literal, const Substitution& s, VarNames& names) const {
  const Literal& lit = literals[static_cast<std::size_t>(literal)];
  std::string out = lit.pred;
  if (!lit.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < lit.args.size(); ++i) {
      if (i) out += ",";
      out += names.term(s.apply(lit.args[i]));
    }
    out += ")";
  }
  out += polarity_sign(lit.polarity);
  return out;
}

namespace {

class Unfolder {
 public:
  explicit Unfolder(ProofFrame& frame) : f_(frame) {}

  int make(const MillFormula& formula, Polarity pol, int root) {
    const int id = static_cast<int>(f_.nodes.size());
    FrameNode n;
    n.formula = formula;
    n.polarity = pol;
    n.root = root;
    f_.nodes.push_back(n);
    switch (formula.kind()) {
      case MillFormula::Kind::Atom: {
        Literal lit;
        lit.node = id;
        lit.polarity = pol;
        lit.pred = formula.pred();
        lit.args.assign(formula.args().begin(), formula.args().end());
        f_.nodes[static_cast<std::size_t>(id)].literal = static_cast<int>(f_.literals.size());
        f_.literals.push_back(std::move(lit));
        return id;
      }
      case MillFormula::Kind::Tensor: {
        const int a = make(formula.left(), pol, root);
        const int b = make(formula.right(), pol, root);
        add_link(pol == Polarity::Positive ? LinkKind::Tensor : LinkKind::Par, {a, b}, id, Term());
        return id;
      }
      case MillFormula::Kind::Lolli: {
        const int a = make(formula.left(), flip(pol), root);
        const int b = make(formula.right(), pol, root);
        add_link(pol == Polarity::Positive ? LinkKind::Par : LinkKind::Tensor, {a, b}, id, Term());
        return id;
      }
      case MillFormula::Kind::Forall:
      case MillFormula::Kind::Exists: {
        const bool universal = (formula.kind() == MillFormula::Kind::Forall) ==
                               (pol == Polarity::Positive);
        std::string hint = formula.var().name();
        Term v = fresh_var(hint, universal);
        (universal ? f_.eigenvariables : f_.metavariables).insert(v.var_id());
        const int p = make(instantiate(formula.body(), formula.var().var_id(), v), pol, root);
        add_link(universal ? LinkKind::Universal : LinkKind::Existential, {p}, id, v);
        return id;
      }
    }
    return id;
  }

 private:
  void add_link(LinkKind kind, std::vector<int> premisses, int conclusion, Term var) {
    const int lid = static_cast<int>(f_.links.size());
    for (int p : premisses) f_.nodes[static_cast<std::size_t>(p)].consumer = lid;
    f_.nodes[static_cast<std::size_t>(conclusion)].producer = lid;
    Link l;
    l.kind = kind;
    l.premisses = std::move(premisses);
    l.conclusions = {conclusion};
    l.var = std::move(var);
    f_.links.push_back(std::move(l));
  }

  ProofFrame& f_;
};

void recompute_roots(ProofFrame& f) {
  for (FrameNode& n : f.nodes) n.root = -1;
  for (std::size_t r = 0; r < f.conclusions.size(); ++r) {
    std::vector<int> stack{f.conclusions[r]};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      FrameNode& n = f.nodes[static_cast<std::size_t>(v)];
      n.root = static_cast<int>(r);
      if (n.producer >= 0)
        for (int p : f.links[static_cast<std::size_t>(n.producer)].premisses) stack.push_back(p);
    }
  }
}

struct VarInfo {
  std::set<VarId> rigid;
  std::set<VarId> flexible;
};

VarInfo node_vars(const MillFormula& f, const Substitution& s) {
  VarInfo out;
  for (const auto& [id, t] : free_var_terms(f)) {
    if (const Term* b = s.lookup(id)) {
      b->collect_rigid(out.rigid);
      b->collect_flexible(out.flexible);
    } else if (t.is_rigid()) {
      out.rigid.insert(id);
    } else {
      out.flexible.insert(id);
    }
  }
  return out;
}

Term replace_rigid(const Term& t, const std::set<VarId>& vars, const Term& by) {
  if (t.is_var()) return vars.count(t.var_id()) ? by : t;
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(replace_rigid(a, vars, by));
  return Term::app(t.name(), std::move(args));
}

bool pairs_equal(const ProofFrame& f, const Matching& m, const Substitution& s) {
  for (const auto& [n, p] : m) {
    const Literal& a = f.literals[static_cast<std::size_t>(n)];
    const Literal& b = f.literals[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (s.apply(a.args[i]) != s.apply(b.args[i])) return false;
  }
  return true;
}

}  // namespace

ProofFrame unfold(const std::vector<MillFormula>& antecedent, const MillFormula& succedent) {
  ProofFrame f;
  Unfolder u(f);
  int root = 0;
  for (const MillFormula& a : antecedent) f.conclusions.push_back(u.make(a, Polarity::Negative, root++));
  f.conclusions.push_back(u.make(succedent, Polarity::Positive, root));
  return f;
}

Matching normalize_matching(Matching m) {
  std::sort(m.begin(), m.end());
  return m;
}

bool ProofStructure::has_cuts() const {
  return std::any_of(frame.links.begin(), frame.links.end(),
                     [](const Link& l) { return l.alive && l.kind == LinkKind::Cut; });
}

std::vector<MillFormula> ProofStructure::conclusion_formulas() const {
  std::vector<MillFormula> out;
  for (int c : frame.conclusions)
    out.push_back(substitute(frame.nodes[static_cast<std::size_t>(c)].formula, subst));
  return out;
}

MatchResult axiom_match(const ProofFrame& frame, const Matching& matching) {
  MatchResult r;
  std::vector<int> seen(frame.literals.size(), 0);
  for (const auto& [n, p] : matching) {
    if (n < 0 || p < 0 || static_cast<std::size_t>(n) >= frame.literals.size() ||
        static_cast<std::size_t>(p) >= frame.literals.size()) {
      r.failure = MatchFailure::Pairing;
      return r;
    }
    const Literal& a = frame.literals[static_cast<std::size_t>(n)];
    const Literal& b = frame.literals[static_cast<std::size_t>(p)];
    if (a.polarity != Polarity::Negative || b.polarity != Polarity::Positive ||
        a.pred != b.pred || a.args.size() != b.args.size()) {
      r.failure = MatchFailure::Pairing;
      return r;
    }
    ++seen[static_cast<std::size_t>(n)];
    ++seen[static_cast<std::size_t>(p)];
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] != 1 || !frame.nodes[static_cast<std::size_t>(frame.literals[i].node)].alive) {
      r.failure = MatchFailure::Pairing;
      return r;
    }
  }
  Substitution s;
  for (const auto& [n, p] : matching) {
    auto u = unify_all(frame.literals[static_cast<std::size_t>(n)].args,
                       frame.literals[static_cast<std::size_t>(p)].args, s);
    if (!u) {
      r.failure = MatchFailure::Unification;
      return r;
    }
    s = std::move(*u);
  }
  ProofStructure ps{frame, normalize_matching(matching), std::move(s)};
  if (violates_strictness(ps)) {
    r.failure = MatchFailure::Strictness;
    return r;
  }
  r.structure = std::move(ps);
  return r;
}

bool violates_strictness(const ProofStructure& ps) {
  static const Term kUnused = Term::constant("$unused");
  for (VarId m : ps.frame.metavariables) {
    const Term* b = ps.subst.lookup(m);
    if (!b) continue;
    std::set<VarId> rigid;
    b->collect_rigid(rigid);
    if (rigid.empty()) continue;
    Substitution s2 = ps.subst;
    s2.assign(m, replace_rigid(*b, rigid, kUnused));
    if (!pairs_equal(ps.frame, ps.matching, s2)) continue;
    ProofStructure alt{ps.frame, ps.matching, s2};
    if (is_net(alt)) return true;
  }
  return false;
}

bool check_switchings(const ProofStructure& ps) {
  const ProofFrame& f = ps.frame;
  std::vector<int> dense(f.nodes.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < f.nodes.size(); ++i)
    if (f.nodes[i].alive) dense[i] = n++;
  std::vector<std::pair<int, int>> fixed;
  std::vector<std::pair<int, std::vector<int>>> choices;  // conclusion, candidate endpoints
  auto d = [&](int v) { return dense[static_cast<std::size_t>(v)]; };
  for (const Link& l : f.links) {
    if (!l.alive) continue;
    switch (l.kind) {
      case LinkKind::Axiom:
      case LinkKind::Cut:
        fixed.emplace_back(d(l.premisses.empty() ? l.conclusions[0] : l.premisses[0]),
                           d(l.premisses.size() > 1 ? l.premisses[1] : l.conclusions.back()));
        break;
      case LinkKind::Tensor:
        for (int p : l.premisses) fixed.emplace_back(d(l.conclusions[0]), d(p));
        break;
      case LinkKind::Existential:
        fixed.emplace_back(d(l.conclusions[0]), d(l.premisses[0]));
        break;
      case LinkKind::Par:
        choices.push_back({d(l.conclusions[0]), {d(l.premisses[0]), d(l.premisses[1])}});
        break;
      case LinkKind::Universal: {
        std::vector<int> cand{d(l.premisses[0])};
        const VarId x = l.var.var_id();
        for (std::size_t i = 0; i < f.nodes.size(); ++i) {
          // The conclusion itself is a legal target; jumping there closes a loop.
          if (!f.nodes[i].alive || static_cast<int>(i) == l.premisses[0]) continue;
          if (free_rigid_vars(f.nodes[i].formula, ps.subst).count(x)) cand.push_back(dense[i]);
        }
        choices.push_back({d(l.conclusions[0]), std::move(cand)});
        break;
      }
    }
  }
  for (const auto& [a, b] : ps.matching)
    fixed.emplace_back(d(f.literals[static_cast<std::size_t>(a)].node),
                       d(f.literals[static_cast<std::size_t>(b)].node));
  if (static_cast<int>(fixed.size() + choices.size()) != n - 1) return false;

  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  std::function<int(std::vector<int>&, int)> find = [&](std::vector<int>& p, int v) {
    while (p[static_cast<std::size_t>(v)] != v) v = p[static_cast<std::size_t>(v)];
    return v;
  };
  for (const auto& [a, b] : fixed) {
    const int ra = find(parent, a), rb = find(parent, b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
  }
  // Every combination of choices must keep the graph acyclic; with n-1
  // edges that also makes it connected.
  std::function<bool(std::size_t, std::vector<int>&)> all_trees = [&](std::size_t i,
                                                                      std::vector<int>& p) {
    if (i == choices.size()) return true;
    for (int target : choices[i].second) {
      const int ra = find(p, choices[i].first), rb = find(p, target);
      if (ra == rb) return false;
      std::vector<int> q = p;
      q[static_cast<std::size_t>(ra)] = rb;
      if (!all_trees(i + 1, q)) return false;
    }
    return true;
  };
  return all_trees(0, parent);
}

int ContractionGraph::add_vertex(std::set<VarId> eigen, std::vector<int> literals) {
  Vertex v;
  v.eigen = std::move(eigen);
  v.literals = std::move(literals);
  const int id = static_cast<int>(vertices_.size());
  v.members.push_back(id);
  vertices_.push_back(std::move(v));
  parent_.push_back(id);
  return id;
}

int ContractionGraph::add_solid(int a, int b) {
  Edge e;
  e.type = EdgeType::Solid;
  e.from = a;
  e.to = b;
  edges_.push_back(e);
  return static_cast<int>(edges_.size()) - 1;
}

int ContractionGraph::add_par(int from, int to1, int to2) {
  Edge e;
  e.type = EdgeType::Par;
  e.from = from;
  e.to = to1;
  e.to2 = to2;
  edges_.push_back(e);
  return static_cast<int>(edges_.size()) - 1;
}

int ContractionGraph::add_universal(int from, int to, VarId eigen) {
  Edge e;
  e.type = EdgeType::Universal;
  e.from = from;
  e.to = to;
  e.eigen = eigen;
  edges_.push_back(e);
  return static_cast<int>(edges_.size()) - 1;
}

int ContractionGraph::find(int v) const {
  int r = v;
  while (parent_[static_cast<std::size_t>(r)] != r) r = parent_[static_cast<std::size_t>(r)];
  while (parent_[static_cast<std::size_t>(v)] != r) {
    const int next = parent_[static_cast<std::size_t>(v)];
    parent_[static_cast<std::size_t>(v)] = r;
    v = next;
  }
  return r;
}

std::vector<int> ContractionGraph::vertices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < parent_.size(); ++i)
    if (parent_[i] == static_cast<int>(i)) out.push_back(static_cast<int>(i));
  return out;
}

std::size_t ContractionGraph::vertex_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i)
    if (parent_[i] == static_cast<int>(i)) ++n;
  return n;
}

std::vector<ContractionGraph::Edge> ContractionGraph::live_edges() const {
  std::vector<Edge> out;
  for (const Edge& e : edges_) {
    if (!e.alive) continue;
    Edge m = e;
    m.from = find(e.from);
    m.to = find(e.to);
    if (e.to2 >= 0) m.to2 = find(e.to2);
    out.push_back(m);
  }
  return out;
}

std::size_t ContractionGraph::live_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.alive; }));
}

int ContractionGraph::merge(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  Vertex& va = vertices_[static_cast<std::size_t>(a)];
  Vertex& vb = vertices_[static_cast<std::size_t>(b)];
  va.eigen.insert(vb.eigen.begin(), vb.eigen.end());
  va.flexible.insert(vb.flexible.begin(), vb.flexible.end());
  va.pending_rigid.insert(vb.pending_rigid.begin(), vb.pending_rigid.end());
  va.literals.insert(va.literals.end(), vb.literals.begin(), vb.literals.end());
  va.members.insert(va.members.end(), vb.members.begin(), vb.members.end());
  vb = Vertex{};
  parent_[static_cast<std::size_t>(b)] = a;
  return a;
}

std::string ContractionGraph::str() const {
  std::ostringstream out;
  for (int v : vertices()) {
    out << "v" << v << " {";
    bool first = true;
    for (VarId x : vertex(v).eigen) {
      out << (first ? "" : ",") << x;
      first = false;
    }
    out << "}\n";
  }
  for (const Edge& e : live_edges()) {
    switch (e.type) {
      case EdgeType::Solid: out << "v" << e.from << " -- v" << e.to << "\n"; break;
      case EdgeType::Par:
        out << "v" << e.from << " => v" << e.to << ", v" << e.to2 << "\n";
        break;
      case EdgeType::Universal:
        out << "v" << e.from << " => v" << e.to << " [" << e.eigen << "]\n";
        break;
    }
  }
  return out.str();
}

ContractionGraph to_contraction_graph(const ProofFrame& frame, const Matching& matching,
                                      const Substitution& subst) {
  ContractionGraph g;
  std::vector<bool> matched(frame.literals.size(), false);
  for (const auto& [a, b] : matching) {
    matched[static_cast<std::size_t>(a)] = true;
    matched[static_cast<std::size_t>(b)] = true;
  }
  bool pending = false;
  std::vector<int> vid(frame.nodes.size(), -1);
  for (std::size_t i = 0; i < frame.nodes.size(); ++i) {
    const FrameNode& n = frame.nodes[i];
    if (!n.alive) continue;
    VarInfo vars = node_vars(n.formula, subst);
    std::vector<int> lits;
    const bool open = n.literal >= 0 && !matched[static_cast<std::size_t>(n.literal)];
    if (open) {
      lits.push_back(n.literal);
      pending = true;
    }
    vid[i] = g.add_vertex(vars.rigid, std::move(lits));
    ContractionGraph::Vertex& v = g.vertex_mut(vid[i]);
    v.members = {static_cast<int>(i)};
    v.flexible = std::move(vars.flexible);
    if (open) v.pending_rigid = v.eigen;
  }
  auto at = [&](int node) { return vid[static_cast<std::size_t>(node)]; };
  for (const Link& l : frame.links) {
    if (!l.alive) continue;
    switch (l.kind) {
      case LinkKind::Axiom:
      case LinkKind::Cut:
        if (l.premisses.size() == 2) g.add_solid(at(l.premisses[0]), at(l.premisses[1]));
        else if (l.conclusions.size() == 2) g.add_solid(at(l.conclusions[0]), at(l.conclusions[1]));
        break;
      case LinkKind::Tensor:
        for (int p : l.premisses) g.add_solid(at(l.conclusions[0]), at(p));
        break;
      case LinkKind::Existential:
        g.add_solid(at(l.conclusions[0]), at(l.premisses[0]));
        break;
      case LinkKind::Par:
        g.add_par(at(l.conclusions[0]), at(l.premisses[0]), at(l.premisses[1]));
        break;
      case LinkKind::Universal:
        g.add_universal(at(l.conclusions[0]), at(l.premisses[0]), l.var.var_id());
        break;
    }
  }
  for (const auto& [a, b] : matching)
    g.add_solid(at(frame.literals[static_cast<std::size_t>(a)].node),
                at(frame.literals[static_cast<std::size_t>(b)].node));
  g.set_partial(pending);
  return g;
}

ContractionGraph to_contraction_graph(const ProofStructure& ps) {
  return to_contraction_graph(ps.frame, ps.matching, ps.subst);
}

namespace {

bool universal_applicable(const ContractionGraph& g, const ContractionGraph::Edge& e) {
  const int a = g.find(e.from), b = g.find(e.to);
  if (a == b) return false;
  const std::vector<int> vs = g.vertices();
  bool other_flexible = false;
  for (int w : vs) {
    if (w == b) continue;
    if (g.vertex(w).eigen.count(e.eigen)) return false;
    if (!g.vertex(w).flexible.empty()) other_flexible = true;
  }
  if (g.partial() && other_flexible && g.vertex(b).pending_rigid.count(e.eigen)) return false;
  return true;
}

bool applicable(const ContractionGraph& g, const ContractionGraph::Edge& e) {
  if (!e.alive) return false;
  switch (e.type) {
    case ContractionGraph::EdgeType::Solid: return g.find(e.from) != g.find(e.to);
    case ContractionGraph::EdgeType::Par: {
      const int a = g.find(e.from), t1 = g.find(e.to), t2 = g.find(e.to2);
      return t1 == t2 && a != t1;
    }
    case ContractionGraph::EdgeType::Universal: return universal_applicable(g, e);
  }
  return false;
}

void apply_contraction(ContractionGraph& g, std::size_t index, ContractionResult& r, bool trace) {
  const ContractionGraph::Edge e = g.edges()[index];
  ContractionStep step;
  step.into = g.find(e.from);
  step.from = g.find(e.to);
  g.kill_edge(index);
  const int v = g.merge(step.into, step.from);
  switch (e.type) {
    case ContractionGraph::EdgeType::Solid:
      step.rule = 'c';
      ++r.c_steps;
      break;
    case ContractionGraph::EdgeType::Par:
      step.rule = 'p';
      ++r.p_steps;
      break;
    case ContractionGraph::EdgeType::Universal:
      step.rule = 'u';
      step.eigen = e.eigen;
      g.vertex_mut(v).eigen.erase(e.eigen);
      g.vertex_mut(v).pending_rigid.erase(e.eigen);
      ++r.u_steps;
      break;
  }
  if (trace) r.trace.push_back(step);
}

}  // namespace

ContractionResult contract(ContractionGraph g, const ContractOptions& opts) {
  ContractionResult r;
  const auto& edges = g.edges();
  if (opts.random_order) {
    std::mt19937_64 rng(opts.seed);
    for (;;) {
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < edges.size(); ++i)
        if (applicable(g, edges[i])) cand.push_back(i);
      if (cand.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
      apply_contraction(g, cand[pick(rng)], r, opts.trace);
    }
  } else {
    for (;;) {
      bool any = false;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].type == ContractionGraph::EdgeType::Solid && applicable(g, edges[i])) {
          apply_contraction(g, i, r, opts.trace);
          any = true;
        }
      }
      if (any) continue;
      for (auto type : {ContractionGraph::EdgeType::Par, ContractionGraph::EdgeType::Universal}) {
        for (std::size_t i = 0; i < edges.size() && !any; ++i) {
          if (edges[i].type == type && applicable(g, edges[i])) {
            apply_contraction(g, i, r, opts.trace);
            any = true;
          }
        }
        if (any) break;
      }
      if (!any) break;
    }
  }
  r.net = g.vertex_count() == 1 && g.live_edge_count() == 0;
  r.normal_form = std::move(g);
  return r;
}

bool is_net(const ProofStructure& ps) { return contract(to_contraction_graph(ps)).net; }

ProofStructure compose_cut(const ProofStructure& left, const ProofStructure& right,
                           int right_antecedent_index) {
  const ProofFrame& lf = left.frame;
  const ProofFrame& rf = right.frame;
  const int right_hyps = static_cast<int>(rf.conclusions.size()) - 1;
  if (right_antecedent_index < 0 || right_antecedent_index >= right_hyps)
    throw std::invalid_argument("compose_cut: antecedent index out of range");
  const int lgoal = lf.conclusions.back();
  const int rhyp = rf.conclusions[static_cast<std::size_t>(right_antecedent_index)];
  if (!alpha_equivalent(substitute(lf.nodes[static_cast<std::size_t>(lgoal)].formula, left.subst),
                        substitute(rf.nodes[static_cast<std::size_t>(rhyp)].formula, right.subst)))
    throw std::invalid_argument("compose_cut: cut formulas differ");

  ProofStructure out;
  ProofFrame& f = out.frame;
  f = lf;
  const int node_off = static_cast<int>(lf.nodes.size());
  const int link_off = static_cast<int>(lf.links.size());
  const int lit_off = static_cast<int>(lf.literals.size());
  for (FrameNode n : rf.nodes) {
    if (n.producer >= 0) n.producer += link_off;
    if (n.consumer >= 0) n.consumer += link_off;
    if (n.literal >= 0) n.literal += lit_off;
    f.nodes.push_back(std::move(n));
  }
  for (Link l : rf.links) {
    for (int& p : l.premisses) p += node_off;
    for (int& c : l.conclusions) c += node_off;
    f.links.push_back(std::move(l));
  }
  for (Literal lit : rf.literals) {
    lit.node += node_off;
    f.literals.push_back(std::move(lit));
  }
  f.eigenvariables.insert(rf.eigenvariables.begin(), rf.eigenvariables.end());
  f.metavariables.insert(rf.metavariables.begin(), rf.metavariables.end());

  f.conclusions.assign(lf.conclusions.begin(), lf.conclusions.end() - 1);
  for (int i = 0; i <= right_hyps; ++i)
    if (i != right_antecedent_index)
      f.conclusions.push_back(rf.conclusions[static_cast<std::size_t>(i)] + node_off);

  Link cut;
  cut.kind = LinkKind::Cut;
  cut.premisses = {lgoal, rhyp + node_off};
  const int cid = static_cast<int>(f.links.size());
  f.links.push_back(cut);
  f.nodes[static_cast<std::size_t>(lgoal)].consumer = cid;
  f.nodes[static_cast<std::size_t>(rhyp + node_off)].consumer = cid;
  recompute_roots(f);

  out.matching = left.matching;
  for (const auto& [a, b] : right.matching) out.matching.emplace_back(a + lit_off, b + lit_off);
  out.subst = left.subst;
  for (const auto& [v, t] : right.subst.bindings()) out.subst.assign(v, t);
  return out;
}

namespace {

void compact(ProofStructure& ps) {
  ProofFrame& f = ps.frame;
  std::vector<int> nmap(f.nodes.size(), -1), lmap(f.links.size(), -1),
      litmap(f.literals.size(), -1);
  ProofFrame g;
  g.eigenvariables = f.eigenvariables;
  g.metavariables = f.metavariables;
  for (std::size_t i = 0; i < f.nodes.size(); ++i)
    if (f.nodes[i].alive) nmap[i] = static_cast<int>(g.nodes.size()), g.nodes.push_back(f.nodes[i]);
  for (std::size_t i = 0; i < f.links.size(); ++i)
    if (f.links[i].alive) lmap[i] = static_cast<int>(g.links.size()), g.links.push_back(f.links[i]);
  for (std::size_t i = 0; i < f.literals.size(); ++i) {
    if (!f.nodes[static_cast<std::size_t>(f.literals[i].node)].alive) continue;
    litmap[i] = static_cast<int>(g.literals.size());
    Literal lit = f.literals[i];
    lit.node = nmap[static_cast<std::size_t>(lit.node)];
    g.literals.push_back(std::move(lit));
  }
  auto remap = [](const std::vector<int>& m, int v) {
    return v < 0 ? -1 : m[static_cast<std::size_t>(v)];
  };
  for (FrameNode& n : g.nodes) {
    n.producer = remap(lmap, n.producer);
    n.consumer = remap(lmap, n.consumer);
    n.literal = remap(litmap, n.literal);
  }
  for (Link& l : g.links) {
    for (int& p : l.premisses) p = remap(nmap, p);
    for (int& c : l.conclusions) c = remap(nmap, c);
  }
  for (int c : f.conclusions) g.conclusions.push_back(remap(nmap, c));
  Matching m;
  for (const auto& [a, b] : ps.matching) m.emplace_back(remap(litmap, a), remap(litmap, b));
  ps.matching = normalize_matching(std::move(m));
  recompute_roots(g);
  f = std::move(g);
}

}  // namespace

ProofStructure eliminate_cut(const ProofStructure& input, CutStats* stats) {
  ProofStructure ps = input;
  ProofFrame& f = ps.frame;
  CutStats local;
  auto node = [&](int i) -> FrameNode& { return f.nodes[static_cast<std::size_t>(i)]; };
  auto add_cut = [&](int pos, int neg) {
    Link c;
    c.kind = LinkKind::Cut;
    c.premisses = {pos, neg};
    const int id = static_cast<int>(f.links.size());
    f.links.push_back(c);
    node(pos).consumer = id;
    node(neg).consumer = id;
  };
  for (;;) {
    int k = -1;
    for (std::size_t i = 0; i < f.links.size(); ++i)
      if (f.links[i].alive && f.links[i].kind == LinkKind::Cut) {
        k = static_cast<int>(i);
        break;
      }
    if (k < 0) break;
    Link& cut = f.links[static_cast<std::size_t>(k)];
    int p = cut.premisses[0], n = cut.premisses[1];
    if (node(p).polarity == Polarity::Negative) std::swap(p, n);
    cut.alive = false;

    if (node(p).producer < 0) {
      // Atomic cut: the negative premiss takes over the place of the axiom
      // partner of the positive one.
      const int lp = node(p).literal;
      auto it = std::find_if(ps.matching.begin(), ps.matching.end(),
                             [&](const auto& pr) { return pr.second == lp; });
      if (it == ps.matching.end()) throw std::logic_error("eliminate_cut: unmatched literal");
      const int q = f.literals[static_cast<std::size_t>(it->first)].node;
      ps.matching.erase(it);
      const int consumer = node(q).consumer;
      node(n).consumer = consumer;
      if (consumer >= 0) {
        for (int& prem : f.links[static_cast<std::size_t>(consumer)].premisses)
          if (prem == q) prem = n;
      } else {
        for (int& c : f.conclusions)
          if (c == q) c = n;
      }
      node(p).alive = false;
      node(q).alive = false;
      ++local.axiom;
      continue;
    }

    Link& lp = f.links[static_cast<std::size_t>(node(p).producer)];
    Link& ln = f.links[static_cast<std::size_t>(node(n).producer)];
    lp.alive = false;
    ln.alive = false;
    node(p).alive = false;
    node(n).alive = false;
    const std::vector<int> pp = lp.premisses, np = ln.premisses;
    switch (lp.kind) {
      case LinkKind::Tensor:
        add_cut(pp[0], np[0]);
        add_cut(pp[1], np[1]);
        ++local.multiplicative;
        break;
      case LinkKind::Par:
        add_cut(np[0], pp[0]);
        add_cut(pp[1], np[1]);
        ++local.multiplicative;
        break;
      case LinkKind::Universal:
      case LinkKind::Existential: {
        const Term& eigen = lp.kind == LinkKind::Universal ? lp.var : ln.var;
        const Term& witness = lp.kind == LinkKind::Universal ? ln.var : lp.var;
        if (!ps.subst.bind(eigen.var_id(), ps.subst.apply(witness)))
          throw std::logic_error("eliminate_cut: occurs check");
        f.eigenvariables.erase(eigen.var_id());
        add_cut(pp[0], np[0]);
        ++local.quantifier;
        break;
      }
      default:
        throw std::logic_error("eliminate_cut: mismatched links");
    }
  }
  compact(ps);
  if (stats) *stats = local;
  return ps;
}

std::string render_dot(const ProofStructure& ps) {
  const ProofFrame& f = ps.frame;
  VarNames names;
  std::ostringstream out;
  out << "digraph proof {\n  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const FrameNode& n = f.nodes[i];
    if (!n.alive) continue;
    std::string label = names.formula(substitute(n.formula, ps.subst));
    std::string escaped;
    for (char c : label) {
      if (c == '"' || c == '\\') escaped += '\\';
      escaped += c;
    }
    out << "  n" << i << " [label=\"" << escaped << polarity_sign(n.polarity) << "\"];\n";
  }
  for (std::size_t i = 0; i < f.links.size(); ++i) {
    const Link& l = f.links[i];
    if (!l.alive) continue;
    const bool dotted = is_asynchronous(l.kind);
    std::string label = link_kind_name(l.kind);
    if (l.kind == LinkKind::Universal || l.kind == LinkKind::Existential)
      label += " " + names.term(ps.subst.apply(l.var));
    out << "  l" << i << " [shape=box,label=\"" << label << "\""
        << (dotted ? ",style=dotted" : "") << "];\n";
    for (int p : l.premisses) out << "  n" << p << " -> l" << i << ";\n";
    for (int c : l.conclusions) out << "  l" << i << " -> n" << c << ";\n";
  }
  for (std::size_t i = 0; i < ps.matching.size(); ++i) {
    const auto& [a, b] = ps.matching[i];
    out << "  n" << f.literals[static_cast<std::size_t>(a)].node << " -> n"
        << f.literals[static_cast<std::size_t>(b)].node << " [dir=none,label=\"ax\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string render_dot(const ContractionGraph& g) {
  std::ostringstream out;
  out << "digraph contraction {\n";
  for (int v : g.vertices()) {
    out << "  v" << v << " [label=\"{";
    bool first = true;
    for (VarId x : g.vertex(v).eigen) {
      out << (first ? "" : ",") << "x" << x;
      first = false;
    }
    out << "}\"];\n";
  }
  for (const auto& e : g.live_edges()) {
    switch (e.type) {
      case ContractionGraph::EdgeType::Solid:
        out << "  v" << e.from << " -> v" << e.to << " [dir=none];\n";
        break;
      case ContractionGraph::EdgeType::Par:
        out << "  v" << e.from << " -> v" << e.to << " [style=dotted];\n";
        out << "  v" << e.from << " -> v" << e.to2 << " [style=dotted];\n";
        break;
      case ContractionGraph::EdgeType::Universal:
        out << "  v" << e.from << " -> v" << e.to << " [style=dotted,label=\"x" << e.eigen
            << "\"];\n";
        break;
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace mill1

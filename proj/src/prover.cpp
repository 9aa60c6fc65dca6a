#include "mill1/prover.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <exception>
#include <sstream>
#include <thread>

#include "mill1/errors.hpp"

namespace mill1 {

const char* prune_reason_name(PruneReason r) {
  switch (r) {
    case PruneReason::CycleRisk: return "cycle-risk";
    case PruneReason::DisconnectRisk: return "disconnect-risk";
    case PruneReason::IsolatedEmpty: return "isolated-empty";
    case PruneReason::NoConjugate: return "no-conjugate";
    case PruneReason::NotNet: return "not-net";
    case PruneReason::Strictness: return "strictness";
  }
  return "?";
}

std::string SearchStats::str() const {
  std::ostringstream out;
  out << "expansions: " << expansions << "\n";
  out << "proofs: " << proofs << "\n";
  for (const auto& [r, n] : prunes) out << "pruned " << prune_reason_name(r) << ": " << n << "\n";
  out << "time: " << seconds << " s\n";
  return out.str();
}

std::size_t default_node_budget() {
  if (const char* env = std::getenv("MILL1_NODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

namespace {

std::vector<bool> matched_flags(const SearchState& s) {
  std::vector<bool> m(s.frame->literals.size(), false);
  for (const auto& [a, b] : s.matching) {
    m[static_cast<std::size_t>(a)] = true;
    m[static_cast<std::size_t>(b)] = true;
  }
  return m;
}

// Directed reachability along asynchronous edges (conclusion to premiss).
bool async_path(const std::vector<ContractionGraph::Edge>& edges, int from, int to) {
  std::deque<int> queue{from};
  std::vector<int> seen{from};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) return true;
    for (const auto& e : edges) {
      if (e.type == ContractionGraph::EdgeType::Solid || e.from != v) continue;
      for (int t : {e.to, e.to2}) {
        if (t < 0 || std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
        seen.push_back(t);
        queue.push_back(t);
      }
    }
  }
  return false;
}

bool cycle_risk(const ContractionGraph& g, const std::vector<ContractionGraph::Edge>& edges,
                int na, int nb) {
  const int va = g.find(na), vb = g.find(nb);
  return va == vb || async_path(edges, va, vb) || async_path(edges, vb, va);
}

std::vector<int> conjugates_impl(const SearchState& s, const ContractionGraph& g,
                                 const std::vector<ContractionGraph::Edge>& edges,
                                 const std::vector<bool>& matched, int literal) {
  const ProofFrame& f = *s.frame;
  const Literal& l = f.literals[static_cast<std::size_t>(literal)];
  std::vector<int> out;
  for (std::size_t i = 0; i < f.literals.size(); ++i) {
    const Literal& m = f.literals[i];
    if (matched[i] || m.polarity == l.polarity || m.pred != l.pred ||
        m.args.size() != l.args.size())
      continue;
    if (cycle_risk(g, edges, l.node, m.node)) continue;
    if (!unify_all(l.args, m.args, s.subst)) continue;
    out.push_back(static_cast<int>(i));
  }
  return out;
}

struct Selection {
  int literal = -1;
  std::vector<int> candidates;
};

std::optional<Selection> select_impl(const SearchState& s, const ContractionGraph& g) {
  const std::vector<bool> matched = matched_flags(s);
  const auto edges = g.live_edges();
  std::optional<Selection> best;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (matched[i]) continue;
    std::vector<int> c = conjugates_impl(s, g, edges, matched, static_cast<int>(i));
    if (!best || c.size() < best->candidates.size()) {
      best = Selection{static_cast<int>(i), std::move(c)};
      if (best->candidates.empty()) break;
    }
  }
  return best;
}

std::pair<int, int> oriented(const ProofFrame& f, int a, int b) {
  if (f.literals[static_cast<std::size_t>(a)].polarity == Polarity::Negative) return {a, b};
  return {b, a};
}

class Search {
 public:
  Search(const ProofFrame& f, const ProveOptions& o, std::size_t budget,
         std::atomic<std::size_t>& expansions)
      : f_(f), o_(o), budget_(budget), expansions_(expansions) {}

  // Runs the checks of one state. Returns the selection to branch on, or
  // nullopt when the state is closed (pruned or complete).
  std::optional<Selection> visit(const SearchState& s) {
    ++stats.expansions;
    if (expansions_.fetch_add(1) + 1 > budget_) throw ResourceLimit(budget_);
    ContractionResult r = contract(to_contraction_graph(f_, s.matching, s.subst));
    if (s.matching.size() * 2 == f_.literals.size()) {
      if (!r.net) return prune(PruneReason::NotNet);
      ProofStructure ps{f_, normalize_matching(s.matching), s.subst};
      if (violates_strictness(ps)) return prune(PruneReason::Strictness);
      proofs.push_back(std::move(ps));
      ++stats.proofs;
      if (o_.limit && proofs.size() >= o_.limit) stop = true;
      return std::nullopt;
    }
    if (auto reason = eager_filters(r.normal_form)) return prune(*reason);
    auto sel = select_impl(s, r.normal_form);
    if (!sel || sel->candidates.empty()) return prune(PruneReason::NoConjugate);
    if (o_.record_selections) stats.selections.push_back({sel->literal, sel->candidates.size()});
    return sel;
  }

  std::optional<SearchState> child(const SearchState& s, int a, int b) const {
    const auto& la = f_.literals[static_cast<std::size_t>(a)];
    const auto& lb = f_.literals[static_cast<std::size_t>(b)];
    auto u = unify_all(la.args, lb.args, s.subst);
    if (!u) return std::nullopt;
    SearchState c{s.frame, s.matching, std::move(*u)};
    c.matching.push_back(oriented(f_, a, b));
    return c;
  }

  void run(const SearchState& s) {
    auto sel = visit(s);
    if (!sel) return;
    for (int m : sel->candidates) {
      if (stop) return;
      if (auto c = child(s, sel->literal, m)) run(*c);
    }
  }

  SearchStats stats;
  std::vector<ProofStructure> proofs;
  bool stop = false;

 private:
  std::nullopt_t prune(PruneReason r) {
    ++stats.prunes[r];
    return std::nullopt;
  }

  const ProofFrame& f_;
  const ProveOptions& o_;
  std::size_t budget_;
  std::atomic<std::size_t>& expansions_;
};

void merge_stats(SearchStats& into, const SearchStats& from) {
  into.expansions += from.expansions;
  into.proofs += from.proofs;
  for (const auto& [r, n] : from.prunes) into.prunes[r] += n;
  into.selections.insert(into.selections.end(), from.selections.begin(), from.selections.end());
}

}  // namespace

std::vector<int> conjugates(const SearchState& s, const ContractionGraph& normal, int literal) {
  return conjugates_impl(s, normal, normal.live_edges(), matched_flags(s), literal);
}

std::optional<int> select_literal(const SearchState& s) {
  ContractionResult r = contract(to_contraction_graph(*s.frame, s.matching, s.subst));
  auto sel = select_impl(s, r.normal_form);
  if (!sel) return std::nullopt;
  return sel->literal;
}

std::optional<PruneReason> eager_filters(const ContractionGraph& g) {
  using EdgeType = ContractionGraph::EdgeType;
  const auto edges = g.live_edges();
  for (const auto& e : edges) {
    // In a normal form every live solid edge is a self-loop.
    if (e.type == EdgeType::Solid && e.from == e.to) return PruneReason::CycleRisk;
    if (e.type != EdgeType::Solid && (e.from == e.to || e.from == e.to2))
      return PruneReason::CycleRisk;
  }
  const std::vector<int> vs = g.vertices();
  if (vs.size() <= 1) return std::nullopt;
  for (int v : vs) {
    if (!g.vertex(v).literals.empty()) continue;
    std::vector<const ContractionGraph::Edge*> incident;
    for (const auto& e : edges)
      if (e.from == v || e.to == v || e.to2 == v) incident.push_back(&e);
    if (incident.empty()) return PruneReason::IsolatedEmpty;
    if (incident.size() != 1) continue;
    const auto& e = *incident.front();
    if (e.type == EdgeType::Solid || e.from == v) continue;
    // v is a literal-free leaf above an asynchronous link: it can gain no
    // more edges, so the link must be contractible by itself.
    if (e.type == EdgeType::Par && e.to != e.to2) return PruneReason::DisconnectRisk;
    if (e.type == EdgeType::Universal) {
      for (int w : vs)
        if (w != v && g.vertex(w).eigen.count(e.eigen)) return PruneReason::DisconnectRisk;
    }
  }
  return std::nullopt;
}

std::optional<PruneReason> eager_filters(const SearchState& s, int a, int b) {
  ContractionResult r = contract(to_contraction_graph(*s.frame, s.matching, s.subst));
  const ProofFrame& f = *s.frame;
  if (cycle_risk(r.normal_form, r.normal_form.live_edges(),
                 f.literals[static_cast<std::size_t>(a)].node,
                 f.literals[static_cast<std::size_t>(b)].node))
    return PruneReason::CycleRisk;
  auto u = unify_all(f.literals[static_cast<std::size_t>(a)].args,
                     f.literals[static_cast<std::size_t>(b)].args, s.subst);
  if (!u) return PruneReason::NoConjugate;
  Matching m = s.matching;
  m.push_back(oriented(f, a, b));
  ContractionResult next = contract(to_contraction_graph(f, m, *u));
  if (m.size() * 2 == f.literals.size()) {
    if (!next.net) return PruneReason::NotNet;
    return std::nullopt;
  }
  return eager_filters(next.normal_form);
}

ProveResult prove(const ProofFrame& frame, const ProveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t budget = opts.budget ? opts.budget : default_node_budget();
  std::atomic<std::size_t> expansions{0};
  ProveResult out;
  SearchState root{&frame, {}, {}};

  Search main(frame, opts, budget, expansions);
  if (opts.jobs <= 1 || frame.literals.empty()) {
    main.run(root);
    out.proofs = std::move(main.proofs);
    out.stats = std::move(main.stats);
  } else {
    auto sel = main.visit(root);
    out.stats = main.stats;
    out.proofs = std::move(main.proofs);
    if (sel) {
      const std::size_t n = sel->candidates.size();
      std::vector<Search> workers;
      workers.reserve(n);
      for (std::size_t i = 0; i < n; ++i) workers.emplace_back(frame, opts, budget, expansions);
      std::vector<std::exception_ptr> errors(n);
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            if (auto c = main.child(root, sel->literal, sel->candidates[i])) workers[i].run(*c);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      };
      std::vector<std::thread> threads;
      const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(opts.jobs), n);
      for (std::size_t t = 0; t < count; ++t) threads.emplace_back(work);
      for (auto& t : threads) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
      for (auto& w : workers) {
        merge_stats(out.stats, w.stats);
        for (auto& p : w.proofs) out.proofs.push_back(std::move(p));
      }
      if (opts.limit && out.proofs.size() > opts.limit) out.proofs.resize(opts.limit);
      out.stats.proofs = out.proofs.size();
    }
  }
  out.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ProveResult prove(const std::vector<MillFormula>& antecedent, const MillFormula& succedent,
                  const ProveOptions& opts) {
  ProofFrame frame = unfold(antecedent, succedent);
  ProveResult r = prove(frame, opts);
  return r;
}

}  // namespace mill1

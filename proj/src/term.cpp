#include "mill1/term.hpp"

#include <atomic>
#include <cctype>
#include <sstream>
#include <utility>

namespace mill1 {

struct Term::Node {
  Kind kind;
  VarId id = 0;
  bool rigid = false;
  std::string name;
  std::vector<Term> args;
};

namespace {

std::atomic<VarId> g_next_var{1};

const std::shared_ptr<const Term::Node>& placeholder() {
  static const auto node = [] {
    auto n = std::make_shared<Term::Node>();
    n->kind = Term::Kind::Const;
    n->name = "?";
    return std::shared_ptr<const Term::Node>(n);
  }();
  return node;
}

}  // namespace

Term::Term() : node_(placeholder()) {}

Term Term::var(VarId id, std::string hint, bool rigid) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->id = id;
  n->rigid = rigid;
  n->name = std::move(hint);
  return Term(std::move(n));
}

Term Term::constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::integer(long long value) { return constant(std::to_string(value)); }

Term Term::app(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->name = std::move(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
bool Term::is_rigid() const { return node_->kind == Kind::Var && node_->rigid; }
VarId Term::var_id() const { return node_->id; }
const std::string& Term::name() const { return node_->name; }
std::span<const Term> Term::args() const { return node_->args; }

bool Term::is_integer() const {
  if (!is_const() || name().empty()) return false;
  for (char c : name())
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool Term::occurs(VarId v) const {
  switch (kind()) {
    case Kind::Var: return var_id() == v;
    case Kind::Const: return false;
    case Kind::App:
      for (const Term& a : args())
        if (a.occurs(v)) return true;
      return false;
  }
  return false;
}

bool Term::is_ground() const {
  switch (kind()) {
    case Kind::Var: return false;
    case Kind::Const: return true;
    case Kind::App:
      for (const Term& a : args())
        if (!a.is_ground()) return false;
      return true;
  }
  return true;
}

void Term::collect_vars(std::set<VarId>& out) const {
  if (is_var()) {
    out.insert(var_id());
  } else if (is_app()) {
    for (const Term& a : args()) a.collect_vars(out);
  }
}

void Term::collect_rigid(std::set<VarId>& out) const {
  if (is_var()) {
    if (is_rigid()) out.insert(var_id());
  } else if (is_app()) {
    for (const Term& a : args()) a.collect_rigid(out);
  }
}

void Term::collect_flexible(std::set<VarId>& out) const {
  if (is_var()) {
    if (!is_rigid()) out.insert(var_id());
  } else if (is_app()) {
    for (const Term& a : args()) a.collect_flexible(out);
  }
}

std::string Term::str() const {
  switch (kind()) {
    case Kind::Var: {
      const std::string& h = name();
      std::string base = h.empty() ? std::string("_") : h;
      if (!std::isupper(static_cast<unsigned char>(base[0]))) base = "?" + base;
      return base + "_" + std::to_string(var_id());
    }
    case Kind::Const: return name();
    case Kind::App: {
      std::string out = name() + "(";
      for (std::size_t i = 0; i < args().size(); ++i) {
        if (i) out += ",";
        out += args()[i].str();
      }
      return out + ")";
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.var_id() == b.var_id();
    case Term::Kind::Const: return a.name() == b.name();
    case Term::Kind::App:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (a.args()[i] != b.args()[i]) return false;
      return true;
  }
  return false;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Term::Kind::Var: return a.var_id() < b.var_id();
    case Term::Kind::Const: return a.name() < b.name();
    case Term::Kind::App:
      if (a.name() != b.name()) return a.name() < b.name();
      if (a.args().size() != b.args().size()) return a.args().size() < b.args().size();
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (a.args()[i] < b.args()[i]) return true;
        if (b.args()[i] < a.args()[i]) return false;
      }
      return false;
  }
  return false;
}

VarId fresh_id() { return g_next_var.fetch_add(1, std::memory_order_relaxed); }

Term fresh_var(std::string_view hint, bool rigid) {
  return Term::var(fresh_id(), std::string(hint), rigid);
}

// ---------------------------------------------------------------------------

const Term* Substitution::lookup(VarId v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

namespace {

Term apply_map(const std::map<VarId, Term>& m, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = m.find(t.var_id());
      return it == m.end() ? t : it->second;
    }
    case Term::Kind::Const: return t;
    case Term::Kind::App: {
      bool changed = false;
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) {
        args.push_back(apply_map(m, a));
        if (args.back() != a) changed = true;
      }
      return changed ? Term::app(t.name(), std::move(args)) : t;
    }
  }
  return t;
}

}  // namespace

Term Substitution::apply(const Term& t) const {
  if (bindings_.empty()) return t;
  return apply_map(bindings_, t);
}

bool Substitution::bind(VarId v, const Term& t) {
  Term value = apply(t);
  if (value.is_var() && value.var_id() == v) return true;
  if (value.occurs(v)) return false;
  std::map<VarId, Term> single{{v, value}};
  for (auto& [key, bound] : bindings_) bound = apply_map(single, bound);
  bindings_[v] = std::move(value);
  return true;
}

std::string Substitution::str() const {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [v, t] : bindings_) {
    if (!first) out << ", ";
    first = false;
    out << v << "|->" << t.str();
  }
  out << "}";
  return out.str();
}

namespace {

bool unify_into(const Term& a0, const Term& b0, Substitution& s) {
  Term a = s.apply(a0);
  Term b = s.apply(b0);
  if (a == b) return true;
  const bool av = a.is_var() && !a.is_rigid();
  const bool bv = b.is_var() && !b.is_rigid();
  if (av && bv) {
    // Younger variable points at the older one.
    if (a.var_id() > b.var_id()) return s.bind(a.var_id(), b);
    return s.bind(b.var_id(), a);
  }
  if (av) return s.bind(a.var_id(), b);
  if (bv) return s.bind(b.var_id(), a);
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.var_id() == b.var_id();
    case Term::Kind::Const: return a.name() == b.name();
    case Term::Kind::App:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!unify_into(a.args()[i], b.args()[i], s)) return false;
      return true;
  }
  return false;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s) {
  Substitution out = s;
  if (!unify_into(a, b, out)) return std::nullopt;
  return out;
}

std::optional<Substitution> unify_all(std::span<const Term> as, std::span<const Term> bs,
                                      const Substitution& s) {
  if (as.size() != bs.size()) return std::nullopt;
  Substitution out = s;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (!unify_into(as[i], bs[i], out)) return std::nullopt;
  return out;
}

}  // namespace mill1

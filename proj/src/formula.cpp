#include "mill1/formula.hpp"

#include <cctype>
#include <functional>
#include <utility>

#include "lexer.hpp"
#include "mill1/errors.hpp"

namespace mill1 {

using detail::Lexer;
using detail::Token;

// ---------------------------------------------------------------------------
// MillFormula

struct MillFormula::Node {
  Kind kind = Kind::Atom;
  std::string pred;
  std::vector<Term> args;
  MillFormula left{std::shared_ptr<const Node>()};
  MillFormula right{std::shared_ptr<const Node>()};
  Term var;
};

namespace {

std::shared_ptr<const MillFormula::Node> default_mill_node() {
  static const auto n = [] {
    auto p = std::make_shared<MillFormula::Node>();
    p->pred = "?";
    return std::shared_ptr<const MillFormula::Node>(p);
  }();
  return n;
}

}  // namespace

MillFormula::MillFormula() : node_(default_mill_node()) {}

MillFormula MillFormula::atom(std::string pred, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->pred = std::move(pred);
  n->args = std::move(args);
  return MillFormula(std::move(n));
}

MillFormula MillFormula::tensor(MillFormula left, MillFormula right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->left = std::move(left);
  n->right = std::move(right);
  return MillFormula(std::move(n));
}

MillFormula MillFormula::lolli(MillFormula antecedent, MillFormula consequent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lolli;
  n->left = std::move(antecedent);
  n->right = std::move(consequent);
  return MillFormula(std::move(n));
}

MillFormula MillFormula::quantifier(Kind kind, Term var, MillFormula body) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->var = std::move(var);
  n->left = std::move(body);
  return MillFormula(std::move(n));
}

MillFormula MillFormula::forall(Term var, MillFormula body) {
  return quantifier(Kind::Forall, std::move(var), std::move(body));
}

MillFormula MillFormula::exists(Term var, MillFormula body) {
  return quantifier(Kind::Exists, std::move(var), std::move(body));
}

MillFormula::Kind MillFormula::kind() const { return node_->kind; }
const std::string& MillFormula::pred() const { return node_->pred; }
std::span<const Term> MillFormula::args() const { return node_->args; }
const MillFormula& MillFormula::left() const { return node_->left; }
const MillFormula& MillFormula::right() const { return node_->right; }
const Term& MillFormula::var() const { return node_->var; }
const MillFormula& MillFormula::body() const { return node_->left; }

bool operator==(const MillFormula& a, const MillFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MillFormula::Kind::Atom:
      if (a.pred() != b.pred() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (a.args()[i] != b.args()[i]) return false;
      return true;
    case MillFormula::Kind::Tensor:
    case MillFormula::Kind::Lolli:
      return a.left() == b.left() && a.right() == b.right();
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists:
      return a.var() == b.var() && a.body() == b.body();
  }
  return false;
}

namespace {

void collect_free(const MillFormula& f, std::set<VarId>& bound, std::map<VarId, Term>& out) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: {
      std::function<void(const Term&)> walk = [&](const Term& t) {
        if (t.is_var()) {
          if (!bound.count(t.var_id())) out.emplace(t.var_id(), t);
        } else if (t.is_app()) {
          for (const Term& a : t.args()) walk(a);
        }
      };
      for (const Term& a : f.args()) walk(a);
      return;
    }
    case MillFormula::Kind::Tensor:
    case MillFormula::Kind::Lolli:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: {
      const bool fresh = bound.insert(f.var().var_id()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.var().var_id());
      return;
    }
  }
}

Term apply_shadowed(const Substitution& s, const Term& t, const std::set<VarId>& shadow) {
  if (shadow.empty()) return s.apply(t);
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (shadow.count(t.var_id())) return t;
      const Term* b = s.lookup(t.var_id());
      return b ? *b : t;
    }
    case Term::Kind::Const: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(apply_shadowed(s, a, shadow));
      return Term::app(t.name(), std::move(args));
    }
  }
  return t;
}

MillFormula substitute_rec(const MillFormula& f, const Substitution& s, std::set<VarId>& shadow) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      bool changed = false;
      for (const Term& a : f.args()) {
        args.push_back(apply_shadowed(s, a, shadow));
        if (args.back() != a) changed = true;
      }
      return changed ? MillFormula::atom(f.pred(), std::move(args)) : f;
    }
    case MillFormula::Kind::Tensor:
    case MillFormula::Kind::Lolli: {
      MillFormula l = substitute_rec(f.left(), s, shadow);
      MillFormula r = substitute_rec(f.right(), s, shadow);
      if (l == f.left() && r == f.right()) return f;
      return f.kind() == MillFormula::Kind::Tensor ? MillFormula::tensor(l, r)
                                                   : MillFormula::lolli(l, r);
    }
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: {
      const bool fresh = s.binds(f.var().var_id()) && shadow.insert(f.var().var_id()).second;
      MillFormula b = substitute_rec(f.body(), s, shadow);
      if (fresh) shadow.erase(f.var().var_id());
      if (b == f.body()) return f;
      return MillFormula::quantifier(f.kind(), f.var(), b);
    }
  }
  return f;
}

bool terms_match(const Term& a, const Term& b, std::map<VarId, VarId>& fwd,
                 std::map<VarId, VarId>& back, bool rename_free,
                 const std::set<VarId>& bound_a) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      if (a.is_rigid() != b.is_rigid()) return false;
      auto it = fwd.find(a.var_id());
      if (it != fwd.end()) return it->second == b.var_id();
      if (!rename_free && !bound_a.count(a.var_id())) {
        // Free variable: must be identical and not captured on the other side.
        return a.var_id() == b.var_id() && !back.count(b.var_id());
      }
      if (back.count(b.var_id())) return false;
      fwd[a.var_id()] = b.var_id();
      back[b.var_id()] = a.var_id();
      return true;
    }
    case Term::Kind::Const: return a.name() == b.name();
    case Term::Kind::App:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!terms_match(a.args()[i], b.args()[i], fwd, back, rename_free, bound_a)) return false;
      return true;
  }
  return false;
}

bool formulas_match(const MillFormula& a, const MillFormula& b, std::map<VarId, VarId>& fwd,
                    std::map<VarId, VarId>& back, bool rename_free, std::set<VarId>& bound_a) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MillFormula::Kind::Atom:
      if (a.pred() != b.pred() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!terms_match(a.args()[i], b.args()[i], fwd, back, rename_free, bound_a)) return false;
      return true;
    case MillFormula::Kind::Tensor:
    case MillFormula::Kind::Lolli:
      return formulas_match(a.left(), b.left(), fwd, back, rename_free, bound_a) &&
             formulas_match(a.right(), b.right(), fwd, back, rename_free, bound_a);
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: {
      const VarId va = a.var().var_id();
      const VarId vb = b.var().var_id();
      auto saved_f = fwd.find(va) != fwd.end() ? std::optional<VarId>(fwd[va]) : std::nullopt;
      auto saved_b = back.find(vb) != back.end() ? std::optional<VarId>(back[vb]) : std::nullopt;
      fwd[va] = vb;
      back[vb] = va;
      const bool inserted = bound_a.insert(va).second;
      const bool ok = formulas_match(a.body(), b.body(), fwd, back, rename_free, bound_a);
      if (inserted) bound_a.erase(va);
      if (!rename_free) {
        if (saved_f) fwd[va] = *saved_f; else fwd.erase(va);
        if (saved_b) back[vb] = *saved_b; else back.erase(vb);
      }
      return ok;
    }
  }
  return false;
}

}  // namespace

std::set<VarId> free_vars(const MillFormula& f) {
  std::set<VarId> bound;
  std::map<VarId, Term> vars;
  collect_free(f, bound, vars);
  std::set<VarId> out;
  for (const auto& [id, t] : vars) out.insert(id);
  return out;
}

std::map<VarId, Term> free_var_terms(const MillFormula& f) {
  std::set<VarId> bound;
  std::map<VarId, Term> vars;
  collect_free(f, bound, vars);
  return vars;
}

std::set<VarId> free_rigid_vars(const MillFormula& f, const Substitution& s) {
  std::set<VarId> bound;
  std::map<VarId, Term> vars;
  collect_free(f, bound, vars);
  std::set<VarId> out;
  for (const auto& [id, t] : vars) {
    if (const Term* b = s.lookup(id)) {
      b->collect_rigid(out);
    } else if (t.is_rigid()) {
      out.insert(id);
    }
  }
  return out;
}

std::vector<VarId> binder_ids(const MillFormula& f) {
  std::vector<VarId> out;
  std::function<void(const MillFormula&)> walk = [&](const MillFormula& g) {
    switch (g.kind()) {
      case MillFormula::Kind::Atom: return;
      case MillFormula::Kind::Tensor:
      case MillFormula::Kind::Lolli:
        walk(g.left());
        walk(g.right());
        return;
      case MillFormula::Kind::Forall:
      case MillFormula::Kind::Exists:
        out.push_back(g.var().var_id());
        walk(g.body());
        return;
    }
  };
  walk(f);
  return out;
}

MillFormula substitute(const MillFormula& f, const Substitution& s) {
  if (s.empty()) return f;
  std::set<VarId> shadow;
  return substitute_rec(f, s, shadow);
}

MillFormula instantiate(const MillFormula& f, VarId v, const Term& t) {
  Substitution s;
  s.bind(v, t);
  return substitute(f, s);
}

bool alpha_equivalent(const MillFormula& a, const MillFormula& b) {
  std::map<VarId, VarId> fwd, back;
  std::set<VarId> bound;
  return formulas_match(a, b, fwd, back, false, bound);
}

bool variant(const MillFormula& a, const MillFormula& b) {
  std::map<VarId, VarId> fwd, back;
  std::set<VarId> bound;
  return formulas_match(a, b, fwd, back, true, bound);
}

// ---------------------------------------------------------------------------
// Printing

std::string VarNames::name(const Term& var) {
  auto it = names_.find(var.var_id());
  if (it != names_.end()) return it->second;
  std::string base = var.name();
  while (!base.empty() && base[0] == '?') base.erase(0, 1);
  if (base.empty() || !std::isalpha(static_cast<unsigned char>(base[0]))) base = "X" + base;
  base[0] = var.is_rigid() ? static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])))
                           : static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
  if (base == "forall" || base == "exists") base += "_";
  std::string candidate = base;
  for (int k = 1; used_.count(candidate); ++k) candidate = base + std::to_string(k);
  used_.insert(candidate);
  names_[var.var_id()] = candidate;
  return candidate;
}

std::string VarNames::term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return name(t);
    case Term::Kind::Const: return t.name();
    case Term::Kind::App: {
      std::string out = t.name() + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        out += term(t.args()[i]);
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

enum class Ctx { Top, LolliLeft, TensorLeft, TensorRight };

std::string print_mill(const MillFormula& f, Ctx ctx, VarNames& names, bool uni) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: {
      if (f.args().empty()) return f.pred();
      std::string out = f.pred() + "(";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ",";
        out += names.term(f.args()[i]);
      }
      return out + ")";
    }
    case MillFormula::Kind::Tensor: {
      std::string out = print_mill(f.left(), Ctx::TensorLeft, names, uni) +
                        (uni ? " ⊗ " : " * ") +
                        print_mill(f.right(), Ctx::TensorRight, names, uni);
      return ctx == Ctx::TensorRight ? "(" + out + ")" : out;
    }
    case MillFormula::Kind::Lolli: {
      std::string out = print_mill(f.left(), Ctx::LolliLeft, names, uni) +
                        (uni ? " ⊸ " : " -o ") + print_mill(f.right(), Ctx::Top, names, uni);
      return ctx == Ctx::Top ? out : "(" + out + ")";
    }
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: {
      const MillFormula::Kind k = f.kind();
      std::string out;
      if (uni) {
        out = k == MillFormula::Kind::Forall ? "∀" : "∃";
      } else {
        out = k == MillFormula::Kind::Forall ? "forall" : "exists";
      }
      const MillFormula* g = &f;
      bool first = true;
      while (g->kind() == k) {
        if (!first || !uni) out += " ";
        first = false;
        out += names.name(g->var());
        g = &g->body();
      }
      out += ". " + print_mill(*g, Ctx::Top, names, uni);
      return ctx == Ctx::Top ? out : "(" + out + ")";
    }
  }
  return {};
}

}  // namespace

std::string VarNames::formula(const MillFormula& f, bool unicode) {
  return print_mill(f, Ctx::Top, *this, unicode);
}

std::string MillFormula::str() const {
  VarNames names;
  return names.formula(*this);
}

std::string MillFormula::unicode() const {
  VarNames names;
  return names.formula(*this, true);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class TermScope {
 public:
  explicit TermScope(std::map<std::string, Term>* env) : env_(env ? env : &own_) {}

  Term resolve(const std::string& name) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->first == name) return it->second;
    auto it = env_->find(name);
    if (it != env_->end()) return it->second;
    Term v = fresh_var(hint(name));
    env_->emplace(name, v);
    return v;
  }
  void push(const std::string& name, const Term& v) { bound_.emplace_back(name, v); }
  void pop() { bound_.pop_back(); }

  static std::string hint(const std::string& name) {
    return name[0] == '?' ? name.substr(1) : name;
  }

 private:
  std::map<std::string, Term> own_;
  std::map<std::string, Term>* env_;
  std::vector<std::pair<std::string, Term>> bound_;
};

Term parse_term(Lexer& lx, TermScope& scope) {
  Token t = lx.peek();
  if (t.type == Token::Type::Int) {
    lx.next();
    return Term::constant(t.text);
  }
  if (!t.is_ident()) lx.fail("expected a term");
  lx.next();
  if (t.is_var_name()) return scope.resolve(t.text);
  if (lx.accept("(")) {
    std::vector<Term> args;
    do {
      args.push_back(parse_term(lx, scope));
    } while (lx.accept(","));
    lx.expect(")");
    return Term::app(t.text, std::move(args));
  }
  return Term::constant(t.text);
}

std::vector<Term> parse_term_args(Lexer& lx, TermScope& scope) {
  std::vector<Term> args;
  if (lx.accept("(")) {
    do {
      args.push_back(parse_term(lx, scope));
    } while (lx.accept(","));
    lx.expect(")");
  }
  return args;
}

class MillParser {
 public:
  MillParser(Lexer& lx, TermScope& scope) : lx_(lx), scope_(scope) {}

  MillFormula formula() {
    if (at_quantifier()) return quantified();
    MillFormula lhs = tensor();
    if (lx_.accept("-o")) return MillFormula::lolli(lhs, formula());
    return lhs;
  }

 private:
  bool at_quantifier() const {
    const Token& t = lx_.peek();
    return t.is_ident() && (t.text == "forall" || t.text == "exists") && lx_.peek(1).is_var_name();
  }

  MillFormula quantified() {
    Token q = lx_.next();
    const auto kind = q.text == "forall" ? MillFormula::Kind::Forall : MillFormula::Kind::Exists;
    std::vector<Term> vars;
    while (lx_.peek().is_var_name()) {
      Token v = lx_.next();
      Term var = fresh_var(TermScope::hint(v.text));
      scope_.push(v.text, var);
      vars.push_back(var);
    }
    lx_.expect(".");
    MillFormula body = formula();
    for (std::size_t i = 0; i < vars.size(); ++i) scope_.pop();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = MillFormula::quantifier(kind, *it, body);
    return body;
  }

  MillFormula tensor() {
    MillFormula f = unary();
    while (lx_.accept("*")) f = MillFormula::tensor(f, unary());
    return f;
  }

  MillFormula unary() {
    if (lx_.accept("(")) {
      MillFormula f = formula();
      lx_.expect(")");
      return f;
    }
    if (lx_.accept("[")) {
      MillFormula f = formula();
      lx_.expect("]");
      return f;
    }
    if (at_quantifier()) return quantified();
    const Token& t = lx_.peek();
    if (!t.is_ident() || t.is_var_name()) lx_.fail("expected an atomic formula");
    std::string pred = lx_.next().text;
    return MillFormula::atom(pred, parse_term_args(lx_, scope_));
  }

  Lexer& lx_;
  TermScope& scope_;
};

}  // namespace

MillFormula parse_mill(std::string_view text, std::map<std::string, Term>* env) {
  Lexer lx(text);
  TermScope scope(env);
  MillParser p(lx, scope);
  MillFormula f = p.formula();
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return f;
}

Sequent parse_sequent(std::string_view text) {
  Lexer lx(text);
  TermScope scope(nullptr);
  MillParser p(lx, scope);
  Sequent s;
  if (!lx.peek().is("|-")) {
    do {
      s.antecedent.push_back(p.formula());
    } while (lx.accept(","));
  }
  lx.expect("|-");
  s.succedent = p.formula();
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return s;
}

std::string sequent_str(const Sequent& s) {
  VarNames names;
  std::string out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) out += ", ";
    out += names.formula(s.antecedent[i]);
  }
  if (!out.empty()) out += " ";
  out += "|- " + names.formula(s.succedent);
  return out;
}

// ---------------------------------------------------------------------------
// DFormula

struct DFormula::Node {
  Kind kind = Kind::Atom;
  std::string name;
  std::vector<Term> features;
  DFormula left{std::shared_ptr<const Node>()};
  DFormula right{std::shared_ptr<const Node>()};
};

namespace {

std::shared_ptr<const DFormula::Node> default_d_node() {
  static const auto n = [] {
    auto p = std::make_shared<DFormula::Node>();
    p->name = "?";
    return std::shared_ptr<const DFormula::Node>(p);
  }();
  return n;
}

bool binary_kind(DFormula::Kind k) {
  using K = DFormula::Kind;
  switch (k) {
    case K::Bullet: case K::Under: case K::Over:
    case K::OdotGt: case K::UpGt: case K::DownGt:
    case K::OdotLt: case K::UpLt: case K::DownLt:
      return true;
    default:
      return false;
  }
}

bool unary_kind(DFormula::Kind k) {
  using K = DFormula::Kind;
  switch (k) {
    case K::Check: case K::Hat: case K::RProj: case K::RInj: case K::LProj: case K::LInj:
      return true;
    default:
      return false;
  }
}

}  // namespace

DFormula::DFormula() : node_(default_d_node()) {}

DFormula DFormula::atom(std::string name, std::vector<Term> features) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->name = std::move(name);
  n->features = std::move(features);
  return DFormula(std::move(n));
}

DFormula DFormula::binary(Kind kind, DFormula left, DFormula right) {
  if (!binary_kind(kind)) throw Error("DFormula::binary: not a binary connective");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->left = std::move(left);
  n->right = std::move(right);
  return DFormula(std::move(n));
}

DFormula DFormula::unary(Kind kind, DFormula arg) {
  if (!unary_kind(kind)) throw Error("DFormula::unary: not a unary connective");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->left = std::move(arg);
  return DFormula(std::move(n));
}

DFormula DFormula::unit_i() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::UnitI;
  n->name = "I";
  return DFormula(std::move(n));
}

DFormula DFormula::unit_j() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::UnitJ;
  n->name = "J";
  return DFormula(std::move(n));
}

DFormula::Kind DFormula::kind() const { return node_->kind; }
bool DFormula::is_binary() const { return binary_kind(kind()); }
bool DFormula::is_unary() const { return unary_kind(kind()); }
const std::string& DFormula::name() const { return node_->name; }
std::span<const Term> DFormula::features() const { return node_->features; }
const DFormula& DFormula::left() const { return node_->left; }
const DFormula& DFormula::right() const { return node_->right; }

bool operator==(const DFormula& a, const DFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.is_atom()) {
    if (a.name() != b.name() || a.features().size() != b.features().size()) return false;
    for (std::size_t i = 0; i < a.features().size(); ++i)
      if (a.features()[i] != b.features()[i]) return false;
    return true;
  }
  if (a.is_binary()) return a.left() == b.left() && a.right() == b.right();
  if (a.is_unary()) return a.arg() == b.arg();
  return true;
}

namespace {

int d_level(DFormula::Kind k) {
  using K = DFormula::Kind;
  switch (k) {
    case K::Bullet: case K::OdotGt: case K::OdotLt: return 1;
    case K::Under: case K::DownGt: case K::DownLt: return 2;
    case K::Over: case K::UpGt: case K::UpLt: return 3;
    default: return 4;
  }
}

const char* d_op(DFormula::Kind k, bool uni) {
  using K = DFormula::Kind;
  switch (k) {
    case K::Bullet: return uni ? "•" : "*";
    case K::Under: return "\\";
    case K::Over: return "/";
    case K::OdotGt: return uni ? "⊙>" : "o>";
    case K::UpGt: return uni ? "↑>" : "^>";
    case K::DownGt: return uni ? "↓>" : "!>";
    case K::OdotLt: return uni ? "⊙<" : "o<";
    case K::UpLt: return uni ? "↑<" : "^<";
    case K::DownLt: return uni ? "↓<" : "!<";
    case K::Check: return uni ? "ˇ" : "check";
    case K::Hat: return uni ? "ˆ" : "hat";
    case K::RProj: return uni ? "⊳⁻¹" : "rproj";
    case K::RInj: return uni ? "⊳" : "rinj";
    case K::LProj: return uni ? "⊲⁻¹" : "lproj";
    case K::LInj: return uni ? "⊲" : "linj";
    default: return "?";
  }
}

std::string print_d(const DFormula& f, int min_level, VarNames& names, bool uni) {
  using K = DFormula::Kind;
  std::string out;
  const int level = d_level(f.kind());
  if (f.is_atom()) {
    out = f.name();
    if (!f.features().empty()) {
      out += "(";
      for (std::size_t i = 0; i < f.features().size(); ++i) {
        if (i) out += ",";
        out += names.term(f.features()[i]);
      }
      out += ")";
    }
  } else if (f.kind() == K::UnitI || f.kind() == K::UnitJ) {
    out = f.name();
  } else if (f.is_unary()) {
    if (uni) {
      const bool simple = f.arg().is_atom() || f.arg().is_unary() ||
                          f.arg().kind() == K::UnitI || f.arg().kind() == K::UnitJ;
      out = std::string(d_op(f.kind(), true)) +
            (simple ? print_d(f.arg(), 4, names, uni) : "(" + print_d(f.arg(), 1, names, uni) + ")");
    } else {
      out = std::string(d_op(f.kind(), false)) + "(" + print_d(f.arg(), 1, names, uni) + ")";
    }
  } else {
    // Binary operands are parenthesized unless they repeat the parent's
    // connective on its associative side.
    const bool right_assoc = level == 2;
    const bool bare_left = !f.left().is_binary() || (!right_assoc && f.left().kind() == f.kind());
    const bool bare_right = !f.right().is_binary() || (right_assoc && f.right().kind() == f.kind());
    out = print_d(f.left(), bare_left ? 1 : 5, names, uni) + " " + d_op(f.kind(), uni) + " " +
          print_d(f.right(), bare_right ? 1 : 5, names, uni);
  }
  return level < min_level ? "(" + out + ")" : out;
}

class DParser {
 public:
  DParser(Lexer& lx, TermScope& scope) : lx_(lx), scope_(scope) {}

  DFormula product() {
    DFormula d = division();
    for (;;) {
      DFormula::Kind k;
      if (lx_.accept("*")) k = DFormula::Kind::Bullet;
      else if (lx_.accept("o>")) k = DFormula::Kind::OdotGt;
      else if (lx_.accept("o<")) k = DFormula::Kind::OdotLt;
      else break;
      d = DFormula::binary(k, d, division());
    }
    return d;
  }

 private:
  DFormula division() {
    DFormula d = over();
    DFormula::Kind k;
    if (lx_.accept("\\")) k = DFormula::Kind::Under;
    else if (lx_.accept("!>") || lx_.accept("!")) k = DFormula::Kind::DownGt;
    else if (lx_.accept("!<")) k = DFormula::Kind::DownLt;
    else return d;
    return DFormula::binary(k, d, division());
  }

  DFormula over() {
    DFormula d = primary();
    for (;;) {
      DFormula::Kind k;
      if (lx_.accept("/")) k = DFormula::Kind::Over;
      else if (lx_.accept("^>") || lx_.accept("^")) k = DFormula::Kind::UpGt;
      else if (lx_.accept("^<")) k = DFormula::Kind::UpLt;
      else break;
      d = DFormula::binary(k, d, primary());
    }
    return d;
  }

  DFormula primary() {
    if (lx_.accept("(")) {
      DFormula d = product();
      lx_.expect(")");
      return d;
    }
    const Token& t = lx_.peek();
    if (!t.is_ident()) lx_.fail("expected a D formula");
    static const std::map<std::string, DFormula::Kind> synth = {
        {"check", DFormula::Kind::Check}, {"hat", DFormula::Kind::Hat},
        {"rproj", DFormula::Kind::RProj}, {"rinj", DFormula::Kind::RInj},
        {"lproj", DFormula::Kind::LProj}, {"linj", DFormula::Kind::LInj}};
    std::string name = lx_.next().text;
    if (auto it = synth.find(name); it != synth.end()) {
      lx_.expect("(");
      DFormula d = product();
      lx_.expect(")");
      return DFormula::unary(it->second, d);
    }
    if (name == "I") return DFormula::unit_i();
    if (name == "J") return DFormula::unit_j();
    if (name[0] == '?') lx_.fail("a variable cannot be a D atom");
    return DFormula::atom(name, parse_term_args(lx_, scope_));
  }

  Lexer& lx_;
  TermScope& scope_;
};

}  // namespace

std::string DFormula::str() const {
  VarNames names;
  return print_d(*this, 1, names, false);
}

std::string DFormula::unicode() const {
  VarNames names;
  return print_d(*this, 1, names, true);
}

DFormula parse_d(std::string_view text, std::map<std::string, Term>* env) {
  Lexer lx(text);
  TermScope scope(env);
  DParser p(lx, scope);
  DFormula d = p.product();
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return d;
}

int AtomSortTable::sort_of(const std::string& atom) const {
  auto it = sorts_.find(atom);
  return it == sorts_.end() ? 0 : it->second;
}

int sort(const DFormula& f, const AtomSortTable& st) {
  using K = DFormula::Kind;
  int s = 0;
  switch (f.kind()) {
    case K::Atom: s = st.sort_of(f.name()); break;
    case K::UnitI: s = 0; break;
    case K::UnitJ: s = 1; break;
    case K::Bullet: s = sort(f.left(), st) + sort(f.right(), st); break;
    case K::Under: s = sort(f.right(), st) - sort(f.left(), st); break;
    case K::Over: s = sort(f.left(), st) - sort(f.right(), st); break;
    case K::OdotGt:
    case K::OdotLt: s = sort(f.left(), st) + sort(f.right(), st) - 1; break;
    case K::DownGt:
    case K::DownLt: s = sort(f.right(), st) + 1 - sort(f.left(), st); break;
    case K::UpGt:
    case K::UpLt: s = sort(f.left(), st) + 1 - sort(f.right(), st); break;
    case K::Check:
    case K::RInj:
    case K::LInj: s = sort(f.arg(), st) + 1; break;
    case K::Hat:
    case K::RProj:
    case K::LProj: s = sort(f.arg(), st) - 1; break;
  }
  if (s < 0) throw SortError(f.str());
  return s;
}

int position_arity(const DFormula& f, const AtomSortTable& st) { return 2 * (sort(f, st) + 1); }

}  // namespace mill1

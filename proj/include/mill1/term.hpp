// First-order terms over string positions and feature symbols.
//
// A term is a variable, a constant or a functor application. Variables are
// identified by a session-unique integer id; the hint string is kept for
// display only. Rigid variables are the eigenvariables of proof search: they
// take part in unification like constants and are never bound.

#ifndef MILL1_TERM_HPP
#define MILL1_TERM_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mill1 {

using VarId = std::uint64_t;

class Term {
 public:
  enum class Kind { Var, Const, App };

  Term();  // the constant "?" placeholder; only useful as a container default

  static Term var(VarId id, std::string hint, bool rigid = false);
  static Term constant(std::string name);
  static Term integer(long long value);
  static Term app(std::string functor, std::vector<Term> args);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_rigid() const;

  VarId var_id() const;
  // Variable hint, constant name or functor symbol.
  const std::string& name() const;
  std::span<const Term> args() const;
  bool is_integer() const;

  bool occurs(VarId v) const;
  bool is_ground() const;
  void collect_vars(std::set<VarId>& out) const;
  void collect_rigid(std::set<VarId>& out) const;
  void collect_flexible(std::set<VarId>& out) const;

  std::string str() const;

  // Structural equality; variables compare by id only.
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Total order, used for canonical sorting.
  friend bool operator<(const Term& a, const Term& b);

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Returns a variable whose id has never been handed out before in this
// process. Thread-safe.
Term fresh_var(std::string_view hint, bool rigid = false);
VarId fresh_id();

// Idempotent substitution. Every stored binding is already fully applied, so
// apply() is a single pass over the term.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  bool binds(VarId v) const { return bindings_.count(v) != 0; }
  const Term* lookup(VarId v) const;
  const std::map<VarId, Term>& bindings() const { return bindings_; }

  // Adds v |-> t. The term is normalized against the current bindings and
  // existing bindings are rewritten (path compression). Returns false and
  // leaves the substitution untouched when the occurs-check fails.
  bool bind(VarId v, const Term& t);
  // Raw overwrite without normalization. The caller keeps the substitution
  // idempotent (t must not mention any bound variable).
  void assign(VarId v, const Term& t) { bindings_[v] = t; }

  Term apply(const Term& t) const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.bindings_ == b.bindings_;
  }

  std::string str() const;

 private:
  std::map<VarId, Term> bindings_;
};

inline Term apply(const Substitution& s, const Term& t) { return s.apply(t); }

// Most general unifier extending s. The input substitution is never modified;
// nullopt signals a clash or an occurs-check failure. Rigid variables only
// unify with themselves. When two flexible variables meet, the younger one
// (higher id) is bound to the older one.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s);
std::optional<Substitution> unify_all(std::span<const Term> as, std::span<const Term> bs,
                                      const Substitution& s);

}  // namespace mill1

#endif  // MILL1_TERM_HPP

#include "mill1/translate.hpp"

#include <functional>
#include <optional>

#include "mill1/errors.hpp"

namespace mill1 {

namespace {

using K = DFormula::Kind;

// A translated subformula, or the position identifications of a unit.
struct Piece {
  bool unit = false;
  std::vector<std::pair<Term, Term>> eqs;
  MillFormula formula;
};

std::vector<Term> fresh_vars(std::size_t n, const char* hint = "X") {
  std::vector<Term> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fresh_var(hint));
  return out;
}

std::vector<Term> slice(const std::vector<Term>& p, std::size_t from, std::size_t to) {
  // [from, to)
  if (to <= from) return {};
  return std::vector<Term>(p.begin() + static_cast<std::ptrdiff_t>(from),
                           p.begin() + static_cast<std::ptrdiff_t>(to));
}

std::vector<Term> cat(std::initializer_list<std::vector<Term>> parts) {
  std::vector<Term> out;
  for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

MillFormula quantify(MillFormula::Kind kind, const std::vector<Term>& vars, MillFormula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    body = MillFormula::quantifier(kind, *it, body);
  return body;
}

DFormula desugar(const DFormula& f) {
  switch (f.kind()) {
    case K::Check: return DFormula::binary(K::UpGt, f.arg(), DFormula::unit_i());
    case K::Hat: return DFormula::binary(K::OdotGt, f.arg(), DFormula::unit_i());
    case K::RProj: return DFormula::binary(K::Under, DFormula::unit_j(), f.arg());
    case K::RInj: return DFormula::binary(K::Bullet, DFormula::unit_j(), f.arg());
    case K::LProj: return DFormula::binary(K::Over, f.arg(), DFormula::unit_j());
    case K::LInj: return DFormula::binary(K::Bullet, f.arg(), DFormula::unit_j());
    default: return f;
  }
}

class Translator {
 public:
  explicit Translator(const AtomSortTable& st) : st_(st) {}

  MillFormula run(const DFormula& f, const std::vector<Term>& p) {
    Piece top = translate(f, p);
    if (top.unit)
      throw TranslateError(TranslateError::Kind::UnsupportedConnective,
                           "a unit cannot be translated on its own: " + f.str());
    absorb(top.eqs);
    return remove_vacuous_quantifiers(replace_everywhere(top.formula));
  }

 private:
  Piece translate(const DFormula& f0, const std::vector<Term>& p) {
    const DFormula f = desugar(f0);
    const int arity = position_arity(f, st_);
    if (static_cast<int>(p.size()) != arity)
      throw TranslateError(TranslateError::Kind::ArityMismatch,
                           f.str() + " needs " + std::to_string(arity) + " positions, got " +
                               std::to_string(p.size()));
    const std::size_t n_p = p.size();
    switch (f.kind()) {
      case K::OdotGt: case K::OdotLt: case K::DownGt: case K::DownLt:
        if (sort(f.left(), st_) < 1) wrap_error(f, f.left());
        break;
      case K::UpGt: case K::UpLt:
        if (arity < 4) wrap_error(f, f);
        break;
      default:
        break;
    }
    switch (f.kind()) {
      case K::Atom: {
        std::vector<Term> args = p;
        args.insert(args.end(), f.features().begin(), f.features().end());
        return formula_piece(MillFormula::atom(f.name(), std::move(args)));
      }
      case K::UnitI: {
        Piece u;
        u.unit = true;
        u.eqs = {{p[0], p[1]}};
        return u;
      }
      case K::UnitJ: {
        Piece u;
        u.unit = true;
        u.eqs = {{p[0], p[1]}, {p[2], p[3]}};
        return u;
      }
      case K::Bullet: {
        const std::size_t n = 2 * static_cast<std::size_t>(sort(f.left(), st_)) + 1;
        Term x = fresh_var("X");
        Piece a = translate(f.left(), cat({slice(p, 0, n), {x}}));
        Piece b = translate(f.right(), cat({{x}, slice(p, n, n_p)}));
        return product({x}, std::move(a), std::move(b));
      }
      case K::Over: {
        const std::size_t n = n_p - 1;
        const std::size_t m = 2 * static_cast<std::size_t>(sort(f.right(), st_)) + 1;
        std::vector<Term> xs = fresh_vars(m);
        Piece b = translate(f.right(), cat({{p[n]}, xs}));
        Piece c = translate(f.left(), cat({slice(p, 0, n), xs}));
        return implication(xs, std::move(b), std::move(c), f);
      }
      case K::Under: {
        const std::size_t n = 2 * static_cast<std::size_t>(sort(f.left(), st_)) + 1;
        std::vector<Term> xs = fresh_vars(n);
        Piece a = translate(f.left(), cat({xs, {p[0]}}));
        Piece c = translate(f.right(), cat({xs, slice(p, 1, n_p)}));
        return implication(xs, std::move(a), std::move(c), f);
      }
      case K::OdotGt: {
        const std::size_t n = 2 * static_cast<std::size_t>(sort(f.right(), st_)) + 2;
        Term x1 = fresh_var("X");
        Term xn = fresh_var("X");
        Piece a = translate(f.left(), cat({{p[0], x1, xn}, slice(p, n - 1, n_p)}));
        Piece b = translate(f.right(), cat({{x1}, slice(p, 1, n - 1), {xn}}));
        return product({x1, xn}, std::move(a), std::move(b));
      }
      case K::UpGt: {
        const std::size_t k = 2 * static_cast<std::size_t>(sort(f.right(), st_));
        std::vector<Term> xs = fresh_vars(k);
        Piece b = translate(f.right(), cat({{p[1]}, xs, {p[2]}}));
        Piece c = translate(f.left(), cat({{p[0]}, xs, slice(p, 3, n_p)}));
        return implication(xs, std::move(b), std::move(c), f);
      }
      case K::DownGt: {
        const std::size_t m = 2 * static_cast<std::size_t>(sort(f.left(), st_)) - 1;
        Term x0 = fresh_var("X");
        std::vector<Term> tail = fresh_vars(m);
        Piece a = translate(f.left(), cat({{x0, p[0], p[n_p - 1]}, tail}));
        Piece c = translate(f.right(), cat({{x0}, slice(p, 1, n_p - 1), tail}));
        return implication(cat({{x0}, tail}), std::move(a), std::move(c), f);
      }
      case K::OdotLt: {
        const std::size_t n = 2 * static_cast<std::size_t>(sort(f.left(), st_)) - 1;
        const std::size_t m = 2 * static_cast<std::size_t>(sort(f.right(), st_)) + 2;
        Term xn = fresh_var("X");
        Term xl = fresh_var("X");
        Piece a = translate(f.left(), cat({slice(p, 0, n), {xn, xl, p[n_p - 1]}}));
        Piece b = translate(f.right(), cat({{xn}, slice(p, n, n + m - 2), {xl}}));
        return product({xn, xl}, std::move(a), std::move(b));
      }
      case K::UpLt: {
        const std::size_t n = n_p - 3;
        const std::size_t k = 2 * static_cast<std::size_t>(sort(f.right(), st_));
        std::vector<Term> xs = fresh_vars(k);
        Piece b = translate(f.right(), cat({{p[n]}, xs, {p[n + 1]}}));
        Piece c = translate(f.left(), cat({slice(p, 0, n), xs, {p[n + 2]}}));
        return implication(xs, std::move(b), std::move(c), f);
      }
      case K::DownLt: {
        const std::size_t n = 2 * static_cast<std::size_t>(sort(f.left(), st_)) - 1;
        std::vector<Term> xs = fresh_vars(n);
        Term xl = fresh_var("X");
        Piece a = translate(f.left(), cat({xs, {p[0], p[n_p - 1], xl}}));
        Piece c = translate(f.right(), cat({xs, slice(p, 1, n_p - 1), {xl}}));
        return implication(cat({xs, {xl}}), std::move(a), std::move(c), f);
      }
      default:
        break;
    }
    throw TranslateError(TranslateError::Kind::UnsupportedConnective,
                         "cannot translate " + f.str());
  }

  [[noreturn]] static void wrap_error(const DFormula& f, const DFormula& host) {
    throw TranslateError(TranslateError::Kind::UnsupportedConnective,
                         "wrapping in " + f.str() + " needs " + host.str() + " of sort >= 1");
  }

  static Piece formula_piece(MillFormula f) {
    Piece p;
    p.formula = std::move(f);
    return p;
  }

  Piece product(const std::vector<Term>& vars, Piece a, Piece b) {
    if (a.unit && b.unit) {
      a.eqs.insert(a.eqs.end(), b.eqs.begin(), b.eqs.end());
      return a;
    }
    if (a.unit) {
      absorb(a.eqs);
      return formula_piece(quantify(MillFormula::Kind::Exists, vars, b.formula));
    }
    if (b.unit) {
      absorb(b.eqs);
      return formula_piece(quantify(MillFormula::Kind::Exists, vars, a.formula));
    }
    return formula_piece(quantify(MillFormula::Kind::Exists, vars,
                                  MillFormula::tensor(a.formula, b.formula)));
  }

  Piece implication(const std::vector<Term>& vars, Piece arg, Piece result, const DFormula& f) {
    if (result.unit)
      throw TranslateError(TranslateError::Kind::UnsupportedConnective,
                           "a unit cannot be the result of " + f.str());
    if (arg.unit) {
      absorb(arg.eqs);
      return formula_piece(quantify(MillFormula::Kind::Forall, vars, result.formula));
    }
    return formula_piece(quantify(MillFormula::Kind::Forall, vars,
                                  MillFormula::lolli(arg.formula, result.formula)));
  }

  void absorb(const std::vector<std::pair<Term, Term>>& eqs) {
    for (const auto& [a, b] : eqs) {
      auto u = unify(a, b, ident_);
      if (!u)
        throw TranslateError(TranslateError::Kind::IdentityConstraint,
                             "a unit forces positions " + ident_.apply(a).str() + " and " +
                                 ident_.apply(b).str() + " to coincide");
      ident_ = std::move(*u);
    }
  }

  // Applies the identifications to every occurrence, bound or not; binders
  // that lose all their occurrences are dropped afterwards.
  MillFormula replace_everywhere(const MillFormula& f) const {
    switch (f.kind()) {
      case MillFormula::Kind::Atom: {
        std::vector<Term> args;
        for (const Term& a : f.args()) args.push_back(ident_.apply(a));
        return MillFormula::atom(f.pred(), std::move(args));
      }
      case MillFormula::Kind::Tensor:
        return MillFormula::tensor(replace_everywhere(f.left()), replace_everywhere(f.right()));
      case MillFormula::Kind::Lolli:
        return MillFormula::lolli(replace_everywhere(f.left()), replace_everywhere(f.right()));
      case MillFormula::Kind::Forall:
      case MillFormula::Kind::Exists:
        return MillFormula::quantifier(f.kind(), f.var(), replace_everywhere(f.body()));
    }
    return f;
  }

  const AtomSortTable& st_;
  Substitution ident_;
};

std::optional<Term> predecessor(const Term& t) {
  if (t.is_app() && t.name() == "s" && t.args().size() == 1) return t.args()[0];
  return std::nullopt;
}

class NonAssoc {
 public:
  MillFormula run(const DFormula& f, const Term& depth) { return apply(translate(f, depth)); }

 private:
  MillFormula translate(const DFormula& f, const Term& t) {
    switch (f.kind()) {
      case K::Atom: {
        std::vector<Term> args{t};
        args.insert(args.end(), f.features().begin(), f.features().end());
        return MillFormula::atom(f.name(), std::move(args));
      }
      case K::Bullet:
        return MillFormula::tensor(translate(f.left(), successor(t)),
                                   translate(f.right(), successor(t)));
      case K::Over: {
        Term u = split(t, f);
        return MillFormula::lolli(translate(f.right(), t), translate(f.left(), u));
      }
      case K::Under: {
        Term u = split(t, f);
        return MillFormula::lolli(translate(f.left(), t), translate(f.right(), u));
      }
      default:
        throw TranslateError(TranslateError::Kind::UnsupportedConnective,
                             "non-associative mode handles only *, / and \\: " + f.str());
    }
  }

  // Returns u with t = s(u), binding t's variable if needed.
  Term split(const Term& t, const DFormula& f) {
    Term cur = subst_.apply(t);
    if (auto u = predecessor(cur)) return *u;
    if (cur.is_var()) {
      Term u = fresh_var("X");
      subst_.bind(cur.var_id(), successor(u));
      return u;
    }
    throw TranslateError(TranslateError::Kind::ArityMismatch,
                         "depth " + cur.str() + " is not a successor in " + f.str());
  }

  MillFormula apply(const MillFormula& f) const { return substitute(f, subst_); }

  Substitution subst_;
};

}  // namespace

Term successor(const Term& t) { return Term::app("s", {t}); }

MillFormula translate_d(const DFormula& f, const std::vector<Term>& positions,
                        const AtomSortTable& st) {
  Translator tr(st);
  return tr.run(f, positions);
}

MillFormula translate_nonassoc(const DFormula& f, const Term& depth) {
  NonAssoc na;
  return na.run(f, depth);
}

MillFormula translate_nonassoc(const DFormula& f) {
  Term x = fresh_var("X");
  return universal_closure(translate_nonassoc(f, x));
}

MillFormula translate_scope(int level, const Term& p0, const Term& p1, const std::string& pred) {
  if (level < 1) throw Error("scope level must be at least 1");
  Term x = fresh_var("X");
  Term arg = x;
  for (int i = 0; i < level; ++i) arg = successor(arg);
  return MillFormula::forall(x, MillFormula::atom(pred, {p0, p1, arg}));
}

MillFormula drop_quantifiers(const MillFormula& f) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: return MillFormula::atom(f.pred());
    case MillFormula::Kind::Tensor:
      return MillFormula::tensor(drop_quantifiers(f.left()), drop_quantifiers(f.right()));
    case MillFormula::Kind::Lolli:
      return MillFormula::lolli(drop_quantifiers(f.left()), drop_quantifiers(f.right()));
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: return drop_quantifiers(f.body());
  }
  return f;
}

MillFormula remove_vacuous_quantifiers(const MillFormula& f) {
  switch (f.kind()) {
    case MillFormula::Kind::Atom: return f;
    case MillFormula::Kind::Tensor:
      return MillFormula::tensor(remove_vacuous_quantifiers(f.left()),
                                 remove_vacuous_quantifiers(f.right()));
    case MillFormula::Kind::Lolli:
      return MillFormula::lolli(remove_vacuous_quantifiers(f.left()),
                                remove_vacuous_quantifiers(f.right()));
    case MillFormula::Kind::Forall:
    case MillFormula::Kind::Exists: {
      MillFormula body = remove_vacuous_quantifiers(f.body());
      if (!free_vars(body).count(f.var().var_id())) return body;
      return MillFormula::quantifier(f.kind(), f.var(), body);
    }
  }
  return f;
}

MillFormula universal_closure(const MillFormula& f, const std::set<VarId>& keep) {
  std::vector<Term> order;
  std::set<VarId> seen;
  std::set<VarId> bound;
  std::function<void(const Term&)> term = [&](const Term& t) {
    if (t.is_var()) {
      if (!bound.count(t.var_id()) && !keep.count(t.var_id()) && seen.insert(t.var_id()).second)
        order.push_back(t);
    } else if (t.is_app()) {
      for (const Term& a : t.args()) term(a);
    }
  };
  std::function<void(const MillFormula&)> walk = [&](const MillFormula& g) {
    switch (g.kind()) {
      case MillFormula::Kind::Atom:
        for (const Term& a : g.args()) term(a);
        return;
      case MillFormula::Kind::Tensor:
      case MillFormula::Kind::Lolli:
        walk(g.left());
        walk(g.right());
        return;
      case MillFormula::Kind::Forall:
      case MillFormula::Kind::Exists: {
        const bool fresh = bound.insert(g.var().var_id()).second;
        walk(g.body());
        if (fresh) bound.erase(g.var().var_id());
        return;
      }
    }
  };
  walk(f);
  return quantify(MillFormula::Kind::Forall, order, f);
}

}  // namespace mill1

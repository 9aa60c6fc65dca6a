// Translation of Displacement calculus formulas to MILL1.
//
// A formula of sort k is translated relative to a vector of 2k+2 string
// position terms. Quantifiers introduced by the translation get fresh
// variables; units become identifications between positions and vanish
// from the result, after which vacuous quantifiers are removed.

#ifndef MILL1_TRANSLATE_HPP
#define MILL1_TRANSLATE_HPP

#include <set>
#include <vector>

#include "mill1/formula.hpp"
#include "mill1/term.hpp"

namespace mill1 {

// Feature arguments of atoms follow the position arguments. Throws
// TranslateError (ArityMismatch, UnsupportedConnective, IdentityConstraint)
// or SortError.
MillFormula translate_d(const DFormula& f, const std::vector<Term>& positions,
                        const AtomSortTable& st);

// Successor encoding over atoms, products and slashes. The open variant
// translates at the given depth term and leaves it free; the closed variant
// picks a fresh depth variable and quantifies universally over what remains.
MillFormula translate_nonassoc(const DFormula& f, const Term& depth);
MillFormula translate_nonassoc(const DFormula& f);

// forall X. pred(p0, p1, s^level(X)); level >= 1.
MillFormula translate_scope(int level, const Term& p0, const Term& p1,
                            const std::string& pred = "s");

// Erases quantifiers and atom arguments.
MillFormula drop_quantifiers(const MillFormula& f);

MillFormula remove_vacuous_quantifiers(const MillFormula& f);

// Universally quantifies the free variables of f not in keep, in order of
// first occurrence.
MillFormula universal_closure(const MillFormula& f, const std::set<VarId>& keep = {});

// Successor term s(t).
Term successor(const Term& t);

}  // namespace mill1

#endif  // MILL1_TRANSLATE_HPP

#pragma once

#include "muhfl/formula.hpp"

namespace muhfl {

// Order-raising translation into the disjunctive fragment.
// raise_sort: prop -> (prop -> prop), int -> int, homomorphic on arrows.
SortPtr raise_sort(const SortPtr& s);

// The continuation form phi#: a formula of raised sort; conjunction becomes
// continuation composition, disjunction distributes, comparisons guard the
// continuation.  Binders are re-annotated with raised sorts.
FormulaPtr raise_body(const FormulaPtr& f);

// raise_top(phi) = phi# true, beta-reduced when simplify is set (the
// administrative redexes introduced by the translation are fixpoint-free
// under the translation's own lambdas, so this terminates).
FormulaPtr raise_top(const FormulaPtr& f, bool simplify = true);

}  // namespace muhfl

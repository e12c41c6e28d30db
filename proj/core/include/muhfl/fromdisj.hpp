#pragma once

#include "muhfl/eqsys.hpp"

namespace muhfl {

// Decomposition of an arrow sort tau into (higher, pred, ints):
//  - `higher` — argument sorts up to and including the last argument of
//    order >= 1 (so it may contain interleaved int arguments),
//  - `pred`   — the number of trailing int-predicate arguments,
//  - `ints`   — the number of trailing int arguments.
struct SortDecomp {
  std::vector<SortPtr> higher;
  int pred = 0;
  int ints = 0;
};
SortDecomp decomp_sort(const SortPtr& s);

// gar = number of trailing int-predicate arguments.
int gar(const SortPtr& s);

// The same split applied to a definition's parameter list.
struct ParamSplit {
  std::vector<Param> higher;    // environment-like prefix (may contain ints)
  std::vector<Param> predvars;  // trailing int^M -> prop parameters
  std::vector<Param> intvars;   // trailing int parameters
};
ParamSplit decomp_params(const std::vector<Param>& params, const SortPtr& fsort);

// Components of the lowered sort (tau)_k; each component drops one order.
// (int)_k = int (a single component).
std::vector<SortPtr> lower_sort_components(const SortPtr& s, int k, int M);
// The packaged version: the product of the components (singletons collapse).
SortPtr lower_sort(const SortPtr& s, int k, int M);

struct LowerStats {
  int order_in = 0, order_out = 0;
  size_t defs_in = 0, defs_out = 0;
  size_t nodes_in = 0, nodes_out = 0;
  std::string to_text() const;
};

struct LowerOptions {
  bool simplify = true;
  bool flatten = true;
};

// Lower a normalized order-(n+1) disjunctive system to an order-max(0,n)
// system.  Each definition F with k trailing int-predicate parameters
// becomes k+1 definitions F$0 .. F$k; main S (\z..true) becomes
// exists z... S$1 z...
EquationSystem lower_system(const EquationSystem& es,
                            const LowerOptions& opts = {},
                            LowerStats* stats = nullptr);

// Translation of a single body under a context; exposed for property tests.
struct LowerCtx {
  const EquationSystem* es = nullptr;  // defined names
  int M = 1;
  std::vector<std::pair<std::string, SortPtr>> gamma;  // higher prefix + ints
  std::vector<std::string> predvars;                   // x_1 .. x_k
};
// Returns the k+2+gar(tau) components (phi_*, phi_0, .., phi_k, trailing).
std::vector<FormulaPtr> lower_formula(const FormulaPtr& f, const LowerCtx& ctx);

// Expand product-sorted parameters and tuple arguments into flat curried
// form.  Throws HigherOrderTupleEscape if a tuple survives anywhere else.
EquationSystem flatten_tuples(const EquationSystem& es);

// Cheap cleanup: beta-normalization, existential witnesses
// (exists u. phi /\ u = e  ~~>  [e/u]phi), literally-false disjuncts, and
// literally-true guards.
EquationSystem simplify_system(const EquationSystem& es);
FormulaPtr simplify_formula(const FormulaPtr& f);

}  // namespace muhfl

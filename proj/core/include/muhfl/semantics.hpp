#pragma once

#include <string>

#include "muhfl/eqsys.hpp"
#include "muhfl/formula.hpp"

namespace muhfl {

struct Verdict {
  enum class Kind { Valid, Invalid, Unknown };
  enum class Reason { FuelExhausted, BoundTruncated };
  Kind kind = Kind::Unknown;
  long steps = 0;        // Valid: length of the witnessing reduction
  bool exhaustive = false;  // Invalid: search space fully explored
  Reason reason = Reason::FuelExhausted;

  bool valid() const { return kind == Kind::Valid; }
  std::string serialize() const;
};

struct SearchBudget {
  size_t max_steps = 100000;   // formulas expanded
  int exists_box = 64;         // exists z instantiated over [-box, box]
  size_t max_states = 200000;  // distinct formulas remembered
  size_t max_nodes = 4096;     // reducts larger than this are pruned
};

// All one-step reducts of a closed prop formula under the evaluation
// contexts C ::= [] | C /\ phi | C phi.  A formula that is literally true
// has no successors.
std::vector<FormulaPtr> step(const FormulaPtr& f, int exists_box);

// Breadth-first search for a reduction to true, memoized up to
// alpha-equivalence.  Invalid is exhaustive only when the frontier emptied
// without hitting any budget and no exists was range-truncated.
Verdict search_valid(const FormulaPtr& f, const SearchBudget& budget = {});

// Replace each exists z . phi by
// (mu x : int -> prop . \y . [y/z]phi \/ [-y/z]phi \/ x (y+1)) 0.
FormulaPtr encode_exists(const FormulaPtr& f);

// Naive Kleene iteration for order-0 systems over the finite box
// [-box, box]^arity; lookups outside the box are bottom.  Returns Valid only
// if main evaluates to top, otherwise Unknown (the truncation makes only
// validity answers sound).
Verdict kleene_eval(const EquationSystem& es, int box, size_t max_iters = 1000);

}  // namespace muhfl

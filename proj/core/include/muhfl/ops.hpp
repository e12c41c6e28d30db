#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>

#include "muhfl/formula.hpp"

namespace muhfl {

// A substitution maps variable names to formulas or integer expressions.
using Binding = std::variant<FormulaPtr, IntExprPtr>;
using Subst = std::map<std::string, Binding>;

// Free variables (formula and integer), in order of first occurrence.
std::vector<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> free_var_set(const FormulaPtr& f);
std::set<std::string> free_var_set(const IntExprPtr& e);

// Simultaneous capture-avoiding substitution.
FormulaPtr substitute(const FormulaPtr& f, const Subst& s);
IntExprPtr substitute(const IntExprPtr& e, const Subst& s);

bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b);

// Alpha-invariant serialization (bound variables as de Bruijn indices);
// usable as a hash/memo key.
std::string canonical_key(const FormulaPtr& f);

// Rename bound variables so that every binder is unique and distinct from
// the names in `taken` (Barendregt convention).
FormulaPtr freshen(const FormulaPtr& f, std::set<std::string> taken = {});

// Lower comparison sugar: = < > >= become <= (an = guard splits into two
// nested <= guards, preserving the disjunctive guard shape).
FormulaPtr desugar(const FormulaPtr& f);
bool has_sugar(const FormulaPtr& f);

// max(0, orders of all mu-binder annotations).
int order_of_formula(const FormulaPtr& f);

// Conjunction appears only as a guard e1 <= e2 /\ phi.
bool is_disjunctive(const FormulaPtr& f);

// Beta-normalize (does not unfold mu).  `fuel` caps the number of
// contractions; on exhaustion the partially reduced term is returned.
FormulaPtr beta_normalize(const FormulaPtr& f, size_t fuel = 1u << 22);

// Evaluate a closed integer expression / one with an environment.
Int eval_int(const IntExprPtr& e);
Int eval_int(const IntExprPtr& e, const std::map<std::string, Int>& env);

// Closed comparison that evaluates to false / true.
bool is_closed_false(const FormulaPtr& f);
bool is_closed_true(const FormulaPtr& f);

}  // namespace muhfl

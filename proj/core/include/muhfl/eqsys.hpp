#pragma once

#include <map>
#include <optional>
#include <set>

#include "muhfl/typecheck.hpp"

namespace muhfl {

struct Param {
  std::string name;
  SortPtr sort;
};

// One parameter position of a definition.  A tuple group corresponds to a
// single product-sorted argument in the definition's declared sort; the
// lowered intermediate representation is the only producer of those.
struct ParamGroup {
  std::vector<Param> members;
  bool is_tuple = false;
};

ParamGroup single_param(std::string name, SortPtr sort);

struct Definition {
  std::string name;
  std::vector<ParamGroup> params;
  FormulaPtr body;

  std::vector<Param> flat_params() const;
};

struct EquationSystem {
  std::vector<std::pair<std::string, SortPtr>> env;  // declaration order
  std::vector<Definition> defs;
  FormulaPtr main;
  std::optional<int> maxar;

  const SortPtr* env_lookup(const std::string& name) const;
  const Definition* find_def(const std::string& name) const;
};

// Declared sorts must match parameter shapes, each body must have the
// residual sort of its definition, and main must be a closed prop.
void typecheck_system(const EquationSystem& es);

// max(0, orders of the declared sorts of all defined names).
int order_of_system(const EquationSystem& es);

// Fixpoint-variable dependencies; a guard whose comparison is literally
// false contributes nothing.
std::set<std::string> fvf(const FormulaPtr& f);
std::map<std::string, std::set<std::string>> dep_graph(
    const EquationSystem& es);
bool recursion_free(const EquationSystem& es);

// Close main by eliminating every definition F as mu F . \params . body
// (sequential Gaussian elimination; valid for mutual recursion since all
// fixpoints are least).  Requires tuple-free parameter lists.
FormulaPtr to_mu_formula(const EquationSystem& es);

// Same, but only defined on recursion-free systems (NotRecursionFree
// otherwise).
FormulaPtr toform(const EquationSystem& es);

// The m-th approximation: stage copies F@0 .. F@m, where stage i >= 1
// bodies reference stage i-1 names and stage 0 bodies are guarded by false.
// Always recursion-free.
EquationSystem m_approximation(const EquationSystem& es, int m);

// Largest arity of an int-predicate argument sort occurring in the sorts of
// a formula's binders (minimum 1).
int compute_maxar(const FormulaPtr& f);

// Normalize a closed disjunctive prop formula into an equation system
// satisfying the body grammar, uniform int-predicate arity M, and the
// main shape S (\z1..zM . true).
EquationSystem normalize(const FormulaPtr& f,
                         std::optional<int> maxar_override = {});

// Body grammar check: phi ::= x | phi \/ phi | e <= e /\ phi | phi phi |
// phi e, with no lambda, mu, exists, or tuple.
bool body_grammar_ok(const FormulaPtr& f);
// Full normalized-system check (grammar + uniform arity + main shape).
void check_normalized(const EquationSystem& es);

// Textual format: %ENV, %DEFS, %MAIN, optional %MAXAR blocks.
std::string print_system(const EquationSystem& es);

// Node count over all definition bodies and the main formula.
size_t system_node_count(const EquationSystem& es);

}  // namespace muhfl

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "muhfl/sort.hpp"

namespace muhfl {

struct IntExpr;
using IntExprPtr = std::shared_ptr<const IntExpr>;

struct IntExpr {
  enum class Kind { Lit, Var, Add, Mul };
  Kind kind;
  Int value;          // Lit
  std::string name;   // Var
  IntExprPtr lhs, rhs;

  explicit IntExpr(Kind k) : kind(k) {}
};

IntExprPtr ilit(Int v);
IntExprPtr ivar(std::string name);
IntExprPtr iadd(IntExprPtr a, IntExprPtr b);
IntExprPtr imul(IntExprPtr a, IntExprPtr b);
IntExprPtr isub(IntExprPtr a, IntExprPtr b);  // a + (-1)*b (or a + lit)

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Core formulas plus transient comparison sugar (EqS/LtS/GtS/GeS), which
// desugar() lowers to <= before anything else looks at the tree.  Tuple only
// appears in the lowered intermediate representation.
struct Formula {
  enum class Kind {
    Var, Or, And, Mu, Abs, App, AppInt, Le, Exists, Tuple,
    EqS, LtS, GtS, GeS
  };
  Kind kind;
  std::string name;   // Var, and the binder of Mu/Abs/Exists
  SortPtr sort;       // binder sort of Mu/Abs (Exists binds an int)
  FormulaPtr f1, f2;  // children; binders use f1 as body
  IntExprPtr e1, e2;  // Le/sugar operands, AppInt argument (e1)
  std::vector<FormulaPtr> items;  // Tuple

  explicit Formula(Kind k) : kind(k) {}
};

FormulaPtr mk_var(std::string name);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_mu(std::string x, SortPtr s, FormulaPtr body);
FormulaPtr mk_abs(std::string x, SortPtr s, FormulaPtr body);
FormulaPtr mk_app(FormulaPtr f, FormulaPtr a);
FormulaPtr mk_app_int(FormulaPtr f, IntExprPtr e);
FormulaPtr mk_le(IntExprPtr a, IntExprPtr b);
FormulaPtr mk_exists(std::string z, FormulaPtr body);
FormulaPtr mk_tuple(std::vector<FormulaPtr> items);  // collapses singletons
FormulaPtr mk_cmp(Formula::Kind sugar, IntExprPtr a, IntExprPtr b);

// true = 0 <= 0, false = 1 <= 0.
FormulaPtr mk_true();
FormulaPtr mk_false();
bool is_literal_true(const FormulaPtr& f);
bool is_literal_false(const FormulaPtr& f);

// Structural node count over formula and embedded integer expressions.
size_t node_count(const FormulaPtr& f);
size_t node_count(const IntExprPtr& e);

}  // namespace muhfl

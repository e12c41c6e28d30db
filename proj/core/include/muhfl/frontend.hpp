#pragma once

#include "muhfl/formula.hpp"

namespace muhfl {

// Sorts of game terms: unit | int | s -> t.
struct TermSort;
using TermSortPtr = std::shared_ptr<const TermSort>;
struct TermSort {
  enum class Kind { Unit, Int, Arrow };
  Kind kind;
  TermSortPtr arg, res;
  explicit TermSort(Kind k) : kind(k) {}
};
TermSortPtr unit_tsort();
TermSortPtr int_tsort();
TermSortPtr arrow_tsort(TermSortPtr a, TermSortPtr b);
bool tsort_eq(const TermSortPtr& a, const TermSortPtr& b);
std::string to_string(const TermSortPtr& s);

// Game terms: () | fail | x | \x:s.M | fix x:s.M | M N | M e |
// M [+] N (angelic) | M [*] N (demonic) | assume(e1 <= e2); M.
struct Term;
using TermPtr = std::shared_ptr<const Term>;
struct Term {
  enum class Kind {
    Unit, Err, Var, Abs, Fix, App, AppInt, Angelic, Demonic, Assume
  };
  Kind kind;
  std::string name;    // Var / binder
  TermSortPtr sort;    // binder annotation
  TermPtr t1, t2;
  IntExprPtr e1, e2;   // Assume guard, AppInt argument (e1)
  explicit Term(Kind k) : kind(k) {}
};

TermPtr t_unit();
TermPtr t_err();
TermPtr t_var(std::string n);
TermPtr t_abs(std::string x, TermSortPtr s, TermPtr b);
TermPtr t_fix(std::string x, TermSortPtr s, TermPtr b);
TermPtr t_app(TermPtr f, TermPtr a);
TermPtr t_app_int(TermPtr f, IntExprPtr e);
TermPtr t_angelic(TermPtr a, TermPtr b);
TermPtr t_demonic(TermPtr a, TermPtr b);
TermPtr t_assume(IntExprPtr a, IntExprPtr b, TermPtr m);

TermSortPtr typecheck_term(const TermPtr& t);

// May-fail semantics as a formula: unit |-> false, fail |-> true,
// fix |-> mu, angelic |-> \/, demonic |-> /\, assume |-> guard;
// unit sorts become prop.
SortPtr formula_sort(const TermSortPtr& s);
FormulaPtr to_formula(const TermPtr& t);

std::string to_string(const TermPtr& t);

}  // namespace muhfl

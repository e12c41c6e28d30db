#include "muhfl/todisj.hpp"

#include "muhfl/ops.hpp"
#include "muhfl/printer.hpp"

namespace muhfl {

SortPtr raise_sort(const SortPtr& s) {
  switch (s->kind) {
    case Sort::Kind::Int:
      return s;
    case Sort::Kind::Prop:
      return arrow(prop_sort(), prop_sort());
    case Sort::Kind::Arrow:
      return arrow(raise_sort(s->arg), raise_sort(s->res));
    default:
      throw SortMismatch("product sort cannot be raised: " + to_string(s));
  }
}

FormulaPtr raise_body(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Le: {
      auto x = NameSupply::fresh("c");
      return mk_abs(x, prop_sort(), mk_and(f, mk_var(x)));
    }
    case Formula::Kind::And: {
      auto x = NameSupply::fresh("c");
      return mk_abs(x, prop_sort(),
                    mk_app(raise_body(f->f1),
                           mk_app(raise_body(f->f2), mk_var(x))));
    }
    case Formula::Kind::Or: {
      auto x = NameSupply::fresh("c");
      return mk_abs(x, prop_sort(),
                    mk_or(mk_app(raise_body(f->f1), mk_var(x)),
                          mk_app(raise_body(f->f2), mk_var(x))));
    }
    case Formula::Kind::Var:
      return f;
    case Formula::Kind::Mu:
      return mk_mu(f->name, raise_sort(f->sort), raise_body(f->f1));
    case Formula::Kind::Abs:
      return mk_abs(f->name, raise_sort(f->sort), raise_body(f->f1));
    case Formula::Kind::App:
      return mk_app(raise_body(f->f1), raise_body(f->f2));
    case Formula::Kind::AppInt:
      return mk_app_int(raise_body(f->f1), f->e1);
    case Formula::Kind::Exists: {
      auto x = NameSupply::fresh("c");
      return mk_abs(x, prop_sort(),
                    mk_exists(f->name, mk_app(raise_body(f->f1), mk_var(x))));
    }
    default:
      throw GrammarViolation("cannot raise " + to_string(f) +
                             "; desugar first");
  }
}

FormulaPtr raise_top(const FormulaPtr& f, bool simplify) {
  auto raised = mk_app(raise_body(desugar(f)), mk_true());
  return simplify ? beta_normalize(raised) : raised;
}

}  // namespace muhfl

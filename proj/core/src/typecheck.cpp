#include "muhfl/typecheck.hpp"

#include "muhfl/ops.hpp"
#include "muhfl/printer.hpp"

namespace muhfl {

SortPtr typecheck_int(const IntExprPtr& e, TypeEnv& env) {
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      return int_sort();
    case IntExpr::Kind::Var: {
      auto* s = env.lookup(e->name);
      if (!s) throw UnboundVariable("unbound variable " + e->name);
      if ((*s)->kind != Sort::Kind::Int)
        throw SortMismatch("variable " + e->name +
                           " used as int but has sort " + to_string(*s));
      return int_sort();
    }
    default:
      typecheck_int(e->lhs, env);
      typecheck_int(e->rhs, env);
      return int_sort();
  }
}

SortPtr typecheck(const FormulaPtr& f, TypeEnv& env) {
  switch (f->kind) {
    case Formula::Kind::Var: {
      auto* s = env.lookup(f->name);
      if (!s) throw UnboundVariable("unbound variable " + f->name);
      if ((*s)->kind == Sort::Kind::Int)
        throw SortMismatch("integer variable " + f->name + " used as formula");
      return *s;
    }
    case Formula::Kind::Le:
    case Formula::Kind::EqS:
    case Formula::Kind::LtS:
    case Formula::Kind::GtS:
    case Formula::Kind::GeS:
      typecheck_int(f->e1, env);
      typecheck_int(f->e2, env);
      return prop_sort();
    case Formula::Kind::Or:
    case Formula::Kind::And: {
      auto a = typecheck(f->f1, env);
      auto b = typecheck(f->f2, env);
      if (a->kind != Sort::Kind::Prop || b->kind != Sort::Kind::Prop)
        throw SortMismatch("connective applied to non-prop operand in " +
                           to_string(f));
      return prop_sort();
    }
    case Formula::Kind::Mu: {
      if (order(f->sort) < 0)
        throw SortMismatch("mu-bound variable cannot have sort int");
      env.push(f->name, f->sort);
      auto b = typecheck(f->f1, env);
      env.pop();
      if (!sort_eq(b, f->sort))
        throw SortMismatch("mu body has sort " + to_string(b) +
                           ", binder annotated " + to_string(f->sort));
      return f->sort;
    }
    case Formula::Kind::Abs: {
      env.push(f->name, f->sort);
      auto b = typecheck(f->f1, env);
      env.pop();
      return arrow(f->sort, b);
    }
    case Formula::Kind::App: {
      auto ft = typecheck(f->f1, env);
      if (ft->kind != Sort::Kind::Arrow)
        throw ArityMismatch("application of non-function in " + to_string(f));
      auto at = typecheck(f->f2, env);
      if (!sort_eq(ft->arg, at))
        throw SortMismatch("argument sort " + to_string(at) +
                           " does not match parameter sort " +
                           to_string(ft->arg) + " in " + to_string(f));
      return ft->res;
    }
    case Formula::Kind::AppInt: {
      auto ft = typecheck(f->f1, env);
      if (ft->kind != Sort::Kind::Arrow || ft->arg->kind != Sort::Kind::Int)
        throw SortMismatch("integer application to non int-function in " +
                           to_string(f));
      typecheck_int(f->e1, env);
      return ft->res;
    }
    case Formula::Kind::Exists: {
      env.push(f->name, int_sort());
      auto b = typecheck(f->f1, env);
      env.pop();
      if (b->kind != Sort::Kind::Prop)
        throw SortMismatch("exists body must be prop in " + to_string(f));
      return prop_sort();
    }
    case Formula::Kind::Tuple: {
      std::vector<SortPtr> cs;
      for (auto& it : f->items) {
        auto c = typecheck(it, env);
        if (c->kind == Sort::Kind::Product)
          throw SortMismatch("nested tuple in " + to_string(f));
        cs.push_back(c);
      }
      return product(std::move(cs));
    }
  }
  throw Error("unreachable");
}

void check_closed_prop(const FormulaPtr& f) {
  auto fv = free_vars(f);
  if (!fv.empty()) throw NotClosed("free variable " + fv.front());
  auto s = typecheck(f);
  if (s->kind != Sort::Kind::Prop)
    throw NotProp("formula has sort " + to_string(s) + ", expected prop");
}

}  // namespace muhfl

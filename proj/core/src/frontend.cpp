#include "muhfl/frontend.hpp"

#include <map>
#include <optional>

#include "muhfl/printer.hpp"
#include "muhfl/typecheck.hpp"

namespace muhfl {

TermSortPtr unit_tsort() {
  static TermSortPtr s = std::make_shared<TermSort>(TermSort::Kind::Unit);
  return s;
}
TermSortPtr int_tsort() {
  static TermSortPtr s = std::make_shared<TermSort>(TermSort::Kind::Int);
  return s;
}
TermSortPtr arrow_tsort(TermSortPtr a, TermSortPtr b) {
  auto s = std::make_shared<TermSort>(TermSort::Kind::Arrow);
  s->arg = std::move(a);
  s->res = std::move(b);
  return s;
}
bool tsort_eq(const TermSortPtr& a, const TermSortPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != TermSort::Kind::Arrow) return true;
  return tsort_eq(a->arg, b->arg) && tsort_eq(a->res, b->res);
}
std::string to_string(const TermSortPtr& s) {
  switch (s->kind) {
    case TermSort::Kind::Unit:
      return "unit";
    case TermSort::Kind::Int:
      return "int";
    case TermSort::Kind::Arrow: {
      std::string l = to_string(s->arg);
      if (s->arg->kind == TermSort::Kind::Arrow) l = "(" + l + ")";
      return l + " -> " + to_string(s->res);
    }
  }
  return "?";
}

TermPtr t_unit() { return std::make_shared<Term>(Term::Kind::Unit); }
TermPtr t_err() { return std::make_shared<Term>(Term::Kind::Err); }
TermPtr t_var(std::string n) {
  auto t = std::make_shared<Term>(Term::Kind::Var);
  t->name = std::move(n);
  return t;
}
static TermPtr t_binder(Term::Kind k, std::string x, TermSortPtr s, TermPtr b) {
  auto t = std::make_shared<Term>(k);
  t->name = std::move(x);
  t->sort = std::move(s);
  t->t1 = std::move(b);
  return t;
}
TermPtr t_abs(std::string x, TermSortPtr s, TermPtr b) {
  return t_binder(Term::Kind::Abs, std::move(x), std::move(s), std::move(b));
}
TermPtr t_fix(std::string x, TermSortPtr s, TermPtr b) {
  return t_binder(Term::Kind::Fix, std::move(x), std::move(s), std::move(b));
}
static TermPtr t_bin(Term::Kind k, TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>(k);
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
TermPtr t_app(TermPtr f, TermPtr a) {
  return t_bin(Term::Kind::App, std::move(f), std::move(a));
}
TermPtr t_app_int(TermPtr f, IntExprPtr e) {
  auto t = std::make_shared<Term>(Term::Kind::AppInt);
  t->t1 = std::move(f);
  t->e1 = std::move(e);
  return t;
}
TermPtr t_angelic(TermPtr a, TermPtr b) {
  return t_bin(Term::Kind::Angelic, std::move(a), std::move(b));
}
TermPtr t_demonic(TermPtr a, TermPtr b) {
  return t_bin(Term::Kind::Demonic, std::move(a), std::move(b));
}
TermPtr t_assume(IntExprPtr a, IntExprPtr b, TermPtr m) {
  auto t = std::make_shared<Term>(Term::Kind::Assume);
  t->e1 = std::move(a);
  t->e2 = std::move(b);
  t->t1 = std::move(m);
  return t;
}

namespace {

TermSortPtr tc(const TermPtr& t, std::map<std::string, TermSortPtr>& env) {
  switch (t->kind) {
    case Term::Kind::Unit:
    case Term::Kind::Err:
      return unit_tsort();
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw UnboundVariable("unbound variable " + t->name);
      return it->second;
    }
    case Term::Kind::Abs:
    case Term::Kind::Fix: {
      auto saved = env.find(t->name);
      std::optional<TermSortPtr> old;
      if (saved != env.end()) old = saved->second;
      env[t->name] = t->sort;
      auto b = tc(t->t1, env);
      if (old) env[t->name] = *old; else env.erase(t->name);
      if (t->kind == Term::Kind::Abs) return arrow_tsort(t->sort, b);
      if (!tsort_eq(b, t->sort))
        throw SortMismatch("fix body has sort " + to_string(b) +
                           ", binder annotated " + to_string(t->sort));
      return t->sort;
    }
    case Term::Kind::App: {
      auto f = tc(t->t1, env);
      if (f->kind != TermSort::Kind::Arrow ||
          f->arg->kind == TermSort::Kind::Int)
        throw SortMismatch("bad application");
      auto a = tc(t->t2, env);
      if (!tsort_eq(f->arg, a))
        throw SortMismatch("argument sort " + to_string(a) + " vs parameter " +
                           to_string(f->arg));
      return f->res;
    }
    case Term::Kind::AppInt: {
      auto f = tc(t->t1, env);
      if (f->kind != TermSort::Kind::Arrow ||
          f->arg->kind != TermSort::Kind::Int)
        throw SortMismatch("bad integer application");
      // integer expressions use formula-level typechecking
      TypeEnv fe;
      for (auto& [n, s] : env)
        if (s->kind == TermSort::Kind::Int) fe.push(n, int_sort());
      typecheck_int(t->e1, fe);
      return f->res;
    }
    case Term::Kind::Angelic:
    case Term::Kind::Demonic: {
      auto a = tc(t->t1, env);
      auto b = tc(t->t2, env);
      if (a->kind != TermSort::Kind::Unit || b->kind != TermSort::Kind::Unit)
        throw SortMismatch("choice operands must have sort unit");
      return unit_tsort();
    }
    case Term::Kind::Assume: {
      TypeEnv fe;
      for (auto& [n, s] : env)
        if (s->kind == TermSort::Kind::Int) fe.push(n, int_sort());
      typecheck_int(t->e1, fe);
      typecheck_int(t->e2, fe);
      auto b = tc(t->t1, env);
      if (b->kind != TermSort::Kind::Unit)
        throw SortMismatch("assume body must have sort unit");
      return unit_tsort();
    }
  }
  throw Error("unreachable");
}

}  // namespace

TermSortPtr typecheck_term(const TermPtr& t) {
  std::map<std::string, TermSortPtr> env;
  return tc(t, env);
}

SortPtr formula_sort(const TermSortPtr& s) {
  switch (s->kind) {
    case TermSort::Kind::Unit:
      return prop_sort();
    case TermSort::Kind::Int:
      return int_sort();
    case TermSort::Kind::Arrow:
      return arrow(formula_sort(s->arg), formula_sort(s->res));
  }
  return prop_sort();
}

FormulaPtr to_formula(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Unit:
      return mk_false();
    case Term::Kind::Err:
      return mk_true();
    case Term::Kind::Var:
      return mk_var(t->name);
    case Term::Kind::Abs:
      return mk_abs(t->name, formula_sort(t->sort), to_formula(t->t1));
    case Term::Kind::Fix:
      return mk_mu(t->name, formula_sort(t->sort), to_formula(t->t1));
    case Term::Kind::App:
      return mk_app(to_formula(t->t1), to_formula(t->t2));
    case Term::Kind::AppInt:
      return mk_app_int(to_formula(t->t1), t->e1);
    case Term::Kind::Angelic:
      return mk_or(to_formula(t->t1), to_formula(t->t2));
    case Term::Kind::Demonic:
      return mk_and(to_formula(t->t1), to_formula(t->t2));
    case Term::Kind::Assume:
      return mk_and(mk_le(t->e1, t->e2), to_formula(t->t1));
  }
  throw Error("unreachable");
}

std::string to_string(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Unit:
      return "()";
    case Term::Kind::Err:
      return "fail";
    case Term::Kind::Var:
      return t->name;
    case Term::Kind::Abs:
      return "(\\" + t->name + " : " + to_string(t->sort) + " . " +
             to_string(t->t1) + ")";
    case Term::Kind::Fix:
      return "(fix " + t->name + " : " + to_string(t->sort) + " . " +
             to_string(t->t1) + ")";
    case Term::Kind::App:
      return "(" + to_string(t->t1) + " " + to_string(t->t2) + ")";
    case Term::Kind::AppInt:
      return "(" + to_string(t->t1) + " (" + to_string(t->e1) + "))";
    case Term::Kind::Angelic:
      return "(" + to_string(t->t1) + " [+] " + to_string(t->t2) + ")";
    case Term::Kind::Demonic:
      return "(" + to_string(t->t1) + " [*] " + to_string(t->t2) + ")";
    case Term::Kind::Assume:
      return "(assume (" + to_string(t->e1) + " <= " + to_string(t->e2) +
             "); " + to_string(t->t1) + ")";
  }
  return "?";
}

}  // namespace muhfl

#include "muhfl/formula.hpp"

namespace muhfl {

IntExprPtr ilit(Int v) {
  auto e = std::make_shared<IntExpr>(IntExpr::Kind::Lit);
  e->value = std::move(v);
  return e;
}

IntExprPtr ivar(std::string name) {
  auto e = std::make_shared<IntExpr>(IntExpr::Kind::Var);
  e->name = std::move(name);
  return e;
}

static IntExprPtr ibin(IntExpr::Kind k, IntExprPtr a, IntExprPtr b) {
  auto e = std::make_shared<IntExpr>(k);
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

IntExprPtr iadd(IntExprPtr a, IntExprPtr b) {
  if (a->kind == IntExpr::Kind::Lit && b->kind == IntExpr::Kind::Lit)
    return ilit(a->value + b->value);
  return ibin(IntExpr::Kind::Add, std::move(a), std::move(b));
}

IntExprPtr imul(IntExprPtr a, IntExprPtr b) {
  if (a->kind == IntExpr::Kind::Lit && b->kind == IntExpr::Kind::Lit)
    return ilit(a->value * b->value);
  return ibin(IntExpr::Kind::Mul, std::move(a), std::move(b));
}

IntExprPtr isub(IntExprPtr a, IntExprPtr b) {
  if (b->kind == IntExpr::Kind::Lit) return iadd(std::move(a), ilit(-b->value));
  return iadd(std::move(a), imul(ilit(-1), std::move(b)));
}

FormulaPtr mk_var(std::string name) {
  auto f = std::make_shared<Formula>(Formula::Kind::Var);
  f->name = std::move(name);
  return f;
}

static FormulaPtr fbin(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>(k);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  return fbin(Formula::Kind::Or, std::move(a), std::move(b));
}

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  return fbin(Formula::Kind::And, std::move(a), std::move(b));
}

static FormulaPtr binder(Formula::Kind k, std::string x, SortPtr s,
                         FormulaPtr body) {
  auto f = std::make_shared<Formula>(k);
  f->name = std::move(x);
  f->sort = std::move(s);
  f->f1 = std::move(body);
  return f;
}

FormulaPtr mk_mu(std::string x, SortPtr s, FormulaPtr body) {
  return binder(Formula::Kind::Mu, std::move(x), std::move(s), std::move(body));
}

FormulaPtr mk_abs(std::string x, SortPtr s, FormulaPtr body) {
  return binder(Formula::Kind::Abs, std::move(x), std::move(s),
                std::move(body));
}

FormulaPtr mk_app(FormulaPtr f, FormulaPtr a) {
  return fbin(Formula::Kind::App, std::move(f), std::move(a));
}

FormulaPtr mk_app_int(FormulaPtr f, IntExprPtr e) {
  auto g = std::make_shared<Formula>(Formula::Kind::AppInt);
  g->f1 = std::move(f);
  g->e1 = std::move(e);
  return g;
}

FormulaPtr mk_le(IntExprPtr a, IntExprPtr b) {
  auto f = std::make_shared<Formula>(Formula::Kind::Le);
  f->e1 = std::move(a);
  f->e2 = std::move(b);
  return f;
}

FormulaPtr mk_exists(std::string z, FormulaPtr body) {
  return binder(Formula::Kind::Exists, std::move(z), int_sort(),
                std::move(body));
}

FormulaPtr mk_tuple(std::vector<FormulaPtr> items) {
  if (items.size() == 1) return items[0];
  auto f = std::make_shared<Formula>(Formula::Kind::Tuple);
  f->items = std::move(items);
  return f;
}

FormulaPtr mk_cmp(Formula::Kind sugar, IntExprPtr a, IntExprPtr b) {
  auto f = std::make_shared<Formula>(sugar);
  f->e1 = std::move(a);
  f->e2 = std::move(b);
  return f;
}

FormulaPtr mk_true() {
  static FormulaPtr t = mk_le(ilit(0), ilit(0));
  return t;
}

FormulaPtr mk_false() {
  static FormulaPtr t = mk_le(ilit(1), ilit(0));
  return t;
}

static bool is_lit(const FormulaPtr& f, int a, int b) {
  return f->kind == Formula::Kind::Le &&
         f->e1->kind == IntExpr::Kind::Lit && f->e1->value == a &&
         f->e2->kind == IntExpr::Kind::Lit && f->e2->value == b;
}

bool is_literal_true(const FormulaPtr& f) { return is_lit(f, 0, 0); }
bool is_literal_false(const FormulaPtr& f) { return is_lit(f, 1, 0); }

size_t node_count(const IntExprPtr& e) {
  if (!e) return 0;
  return 1 + node_count(e->lhs) + node_count(e->rhs);
}

size_t node_count(const FormulaPtr& f) {
  if (!f) return 0;
  size_t n = 1 + node_count(f->f1) + node_count(f->f2) + node_count(f->e1) +
             node_count(f->e2);
  for (auto& it : f->items) n += node_count(it);
  return n;
}

}  // namespace muhfl

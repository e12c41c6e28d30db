#include "muhfl/ops.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace muhfl {

namespace {

void fv_int(const IntExprPtr& e, const std::set<std::string>& bound,
            std::vector<std::string>& out, std::set<std::string>& seen) {
  if (!e) return;
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      return;
    case IntExpr::Kind::Var:
      if (!bound.count(e->name) && seen.insert(e->name).second)
        out.push_back(e->name);
      return;
    default:
      fv_int(e->lhs, bound, out, seen);
      fv_int(e->rhs, bound, out, seen);
  }
}

void fv(const FormulaPtr& f, std::set<std::string>& bound,
        std::vector<std::string>& out, std::set<std::string>& seen) {
  if (!f) return;
  switch (f->kind) {
    case Formula::Kind::Var:
      if (!bound.count(f->name) && seen.insert(f->name).second)
        out.push_back(f->name);
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Abs:
    case Formula::Kind::Exists: {
      bool was = bound.count(f->name) > 0;
      bound.insert(f->name);
      fv(f->f1, bound, out, seen);
      if (!was) bound.erase(f->name);
      return;
    }
    default:
      fv_int(f->e1, bound, out, seen);
      fv_int(f->e2, bound, out, seen);
      fv(f->f1, bound, out, seen);
      fv(f->f2, bound, out, seen);
      for (auto& it : f->items) fv(it, bound, out, seen);
  }
}

}  // namespace

std::vector<std::string> free_vars(const FormulaPtr& f) {
  std::vector<std::string> out;
  std::set<std::string> bound, seen;
  fv(f, bound, out, seen);
  return out;
}

std::set<std::string> free_var_set(const FormulaPtr& f) {
  auto v = free_vars(f);
  return std::set<std::string>(v.begin(), v.end());
}

std::set<std::string> free_var_set(const IntExprPtr& e) {
  std::vector<std::string> out;
  std::set<std::string> bound, seen;
  fv_int(e, bound, out, seen);
  return std::set<std::string>(out.begin(), out.end());
}

IntExprPtr substitute(const IntExprPtr& e, const Subst& s) {
  if (!e) return e;
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      return e;
    case IntExpr::Kind::Var: {
      auto it = s.find(e->name);
      if (it == s.end()) return e;
      if (auto* ie = std::get_if<IntExprPtr>(&it->second)) return *ie;
      throw SortMismatch("formula substituted for integer variable " +
                         e->name);
    }
    default: {
      auto l = substitute(e->lhs, s);
      auto r = substitute(e->rhs, s);
      if (l == e->lhs && r == e->rhs) return e;
      return e->kind == IntExpr::Kind::Add ? iadd(l, r) : imul(l, r);
    }
  }
}

namespace {

std::set<std::string> binding_fvs(const Subst& s) {
  std::set<std::string> out;
  for (auto& [k, v] : s) {
    (void)k;
    if (auto* fp = std::get_if<FormulaPtr>(&v)) {
      auto fs = free_var_set(*fp);
      out.insert(fs.begin(), fs.end());
    } else {
      auto fs = free_var_set(std::get<IntExprPtr>(v));
      out.insert(fs.begin(), fs.end());
    }
  }
  return out;
}

FormulaPtr subst_rec(const FormulaPtr& f, const Subst& s) {
  if (!f || s.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Var: {
      auto it = s.find(f->name);
      if (it == s.end()) return f;
      if (auto* fp = std::get_if<FormulaPtr>(&it->second)) return *fp;
      throw SortMismatch("integer expression substituted for formula variable " +
                         f->name);
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Abs:
    case Formula::Kind::Exists: {
      Subst inner = s;
      inner.erase(f->name);
      if (inner.empty()) return f;
      std::string x = f->name;
      FormulaPtr body = f->f1;
      if (binding_fvs(inner).count(x)) {
        std::string x2 = NameSupply::fresh(x);
        Subst ren;
        if (f->kind == Formula::Kind::Exists)
          ren.emplace(x, Binding(ivar(x2)));
        else
          ren.emplace(x, Binding(mk_var(x2)));
        body = subst_rec(body, ren);
        x = x2;
      }
      auto body2 = subst_rec(body, inner);
      if (body2 == f->f1 && x == f->name) return f;
      auto g = std::make_shared<Formula>(f->kind);
      g->name = x;
      g->sort = f->sort;
      g->f1 = body2;
      return g;
    }
    default: {
      auto g = std::make_shared<Formula>(f->kind);
      g->name = f->name;
      g->sort = f->sort;
      g->f1 = subst_rec(f->f1, s);
      g->f2 = subst_rec(f->f2, s);
      g->e1 = substitute(f->e1, s);
      g->e2 = substitute(f->e2, s);
      for (auto& it : f->items) g->items.push_back(subst_rec(it, s));
      if (g->f1 == f->f1 && g->f2 == f->f2 && g->e1 == f->e1 &&
          g->e2 == f->e2 && g->items == f->items)
        return f;
      return g;
    }
  }
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const Subst& s) {
  return subst_rec(f, s);
}

namespace {

bool aeq_int(const IntExprPtr& a, const IntExprPtr& b,
             const std::map<std::string, int>& da,
             const std::map<std::string, int>& db) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case IntExpr::Kind::Lit:
      return a->value == b->value;
    case IntExpr::Kind::Var: {
      auto ia = da.find(a->name);
      auto ib = db.find(b->name);
      if ((ia == da.end()) != (ib == db.end())) return false;
      if (ia == da.end()) return a->name == b->name;
      return ia->second == ib->second;
    }
    default:
      return aeq_int(a->lhs, b->lhs, da, db) && aeq_int(a->rhs, b->rhs, da, db);
  }
}

bool aeq(const FormulaPtr& a, const FormulaPtr& b,
         std::map<std::string, int>& da, std::map<std::string, int>& db,
         int depth) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Var: {
      auto ia = da.find(a->name);
      auto ib = db.find(b->name);
      if ((ia == da.end()) != (ib == db.end())) return false;
      if (ia == da.end()) return a->name == b->name;
      return ia->second == ib->second;
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Abs:
    case Formula::Kind::Exists: {
      if (a->sort && b->sort && !sort_eq(a->sort, b->sort)) return false;
      if ((a->sort == nullptr) != (b->sort == nullptr)) return false;
      auto sa = da.find(a->name);
      auto sb = db.find(b->name);
      std::optional<int> olda, oldb;
      if (sa != da.end()) olda = sa->second;
      if (sb != db.end()) oldb = sb->second;
      da[a->name] = depth;
      db[b->name] = depth;
      bool ok = aeq(a->f1, b->f1, da, db, depth + 1);
      if (olda) da[a->name] = *olda; else da.erase(a->name);
      if (oldb) db[b->name] = *oldb; else db.erase(b->name);
      return ok;
    }
    default: {
      if (a->items.size() != b->items.size()) return false;
      if (!aeq_int(a->e1, b->e1, da, db) || !aeq_int(a->e2, b->e2, da, db))
        return false;
      if (!aeq(a->f1, b->f1, da, db, depth) ||
          !aeq(a->f2, b->f2, da, db, depth))
        return false;
      for (size_t i = 0; i < a->items.size(); ++i)
        if (!aeq(a->items[i], b->items[i], da, db, depth)) return false;
      return true;
    }
  }
}

void ckey_int(const IntExprPtr& e, const std::map<std::string, int>& d,
              std::string& out) {
  if (!e) return;
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      out += 'l';
      out += e->value.str();
      out += ';';
      return;
    case IntExpr::Kind::Var: {
      auto it = d.find(e->name);
      if (it == d.end()) {
        out += 'v';
        out += e->name;
      } else {
        out += 'b';
        out += std::to_string(it->second);
      }
      out += ';';
      return;
    }
    case IntExpr::Kind::Add:
      out += '+';
      break;
    case IntExpr::Kind::Mul:
      out += '*';
      break;
  }
  ckey_int(e->lhs, d, out);
  ckey_int(e->rhs, d, out);
}

void ckey(const FormulaPtr& f, std::map<std::string, int>& d, int depth,
          std::string& out) {
  if (!f) return;
  out += static_cast<char>('A' + static_cast<int>(f->kind));
  switch (f->kind) {
    case Formula::Kind::Var: {
      auto it = d.find(f->name);
      if (it == d.end()) {
        out += 'v';
        out += f->name;
      } else {
        out += 'b';
        out += std::to_string(it->second);
      }
      out += ';';
      return;
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Abs:
    case Formula::Kind::Exists: {
      if (f->sort) out += to_string(f->sort);
      out += '.';
      auto it = d.find(f->name);
      std::optional<int> old;
      if (it != d.end()) old = it->second;
      d[f->name] = depth;
      ckey(f->f1, d, depth + 1, out);
      if (old) d[f->name] = *old; else d.erase(f->name);
      return;
    }
    default:
      ckey_int(f->e1, d, out);
      ckey_int(f->e2, d, out);
      ckey(f->f1, d, depth, out);
      ckey(f->f2, d, depth, out);
      out += '[';
      for (auto& it2 : f->items) ckey(it2, d, depth, out);
      out += ']';
  }
}

}  // namespace

bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b) {
  std::map<std::string, int> da, db;
  return aeq(a, b, da, db, 0);
}

std::string canonical_key(const FormulaPtr& f) {
  std::string out;
  std::map<std::string, int> d;
  ckey(f, d, 0, out);
  return out;
}

namespace {

FormulaPtr freshen_rec(const FormulaPtr& f, std::map<std::string, std::string>& ren,
                       std::set<std::string>& taken) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Var: {
      auto it = ren.find(f->name);
      return it == ren.end() ? f : mk_var(it->second);
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Abs:
    case Formula::Kind::Exists: {
      std::string x = f->name;
      std::optional<std::string> old;
      auto it = ren.find(x);
      if (it != ren.end()) old = it->second;
      std::string nx = x;
      if (taken.count(x)) {
        nx = NameSupply::fresh(x);
        while (taken.count(nx)) nx = NameSupply::fresh(x);
      }
      taken.insert(nx);
      if (nx != x)
        ren[x] = nx;
      else
        ren.erase(x);
      auto body = freshen_rec(f->f1, ren, taken);
      if (old) ren[x] = *old; else ren.erase(x);
      if (nx == f->name && body == f->f1) return f;
      auto g = std::make_shared<Formula>(f->kind);
      g->name = nx;
      g->sort = f->sort;
      g->f1 = body;
      return g;
    }
    default: {
      Subst s;  // rename inside int expressions too
      auto ren_int = [&](const IntExprPtr& e) -> IntExprPtr {
        if (!e) return e;
        Subst is;
        for (auto& [k, v] : ren) is.emplace(k, Binding(ivar(v)));
        return substitute(e, is);
      };
      auto g = std::make_shared<Formula>(f->kind);
      g->name = f->name;
      g->sort = f->sort;
      g->e1 = ren_int(f->e1);
      g->e2 = ren_int(f->e2);
      g->f1 = freshen_rec(f->f1, ren, taken);
      g->f2 = freshen_rec(f->f2, ren, taken);
      for (auto& it2 : f->items) g->items.push_back(freshen_rec(it2, ren, taken));
      if (g->e1 == f->e1 && g->e2 == f->e2 && g->f1 == f->f1 &&
          g->f2 == f->f2 && g->items == f->items)
        return f;
      return g;
    }
  }
}

}  // namespace

FormulaPtr freshen(const FormulaPtr& f, std::set<std::string> taken) {
  auto fvs = free_var_set(f);
  taken.insert(fvs.begin(), fvs.end());
  std::map<std::string, std::string> ren;
  return freshen_rec(f, ren, taken);
}

bool has_sugar(const FormulaPtr& f) {
  if (!f) return false;
  switch (f->kind) {
    case Formula::Kind::EqS:
    case Formula::Kind::LtS:
    case Formula::Kind::GtS:
    case Formula::Kind::GeS:
      return true;
    default:
      if (has_sugar(f->f1) || has_sugar(f->f2)) return true;
      for (auto& it : f->items)
        if (has_sugar(it)) return true;
      return false;
  }
}

FormulaPtr desugar(const FormulaPtr& f) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::LtS:
      return mk_le(iadd(f->e1, ilit(1)), f->e2);
    case Formula::Kind::GtS:
      return mk_le(iadd(f->e2, ilit(1)), f->e1);
    case Formula::Kind::GeS:
      return mk_le(f->e2, f->e1);
    case Formula::Kind::EqS:
      return mk_and(mk_le(f->e1, f->e2), mk_le(f->e2, f->e1));
    case Formula::Kind::And: {
      // An equality guard splits into two nested <= guards so that the
      // result stays disjunctive.
      auto l = f->f1;
      auto r = desugar(f->f2);
      if (l->kind == Formula::Kind::EqS)
        return mk_and(mk_le(l->e1, l->e2), mk_and(mk_le(l->e2, l->e1), r));
      return mk_and(desugar(l), r);
    }
    case Formula::Kind::Var:
    case Formula::Kind::Le:
      return f;
    default: {
      auto g = std::make_shared<Formula>(f->kind);
      g->name = f->name;
      g->sort = f->sort;
      g->e1 = f->e1;
      g->e2 = f->e2;
      g->f1 = desugar(f->f1);
      g->f2 = desugar(f->f2);
      for (auto& it : f->items) g->items.push_back(desugar(it));
      return g;
    }
  }
}

int order_of_formula(const FormulaPtr& f) {
  if (!f) return 0;
  int m = 0;
  if (f->kind == Formula::Kind::Mu) m = std::max(m, order(f->sort));
  m = std::max(m, order_of_formula(f->f1));
  m = std::max(m, order_of_formula(f->f2));
  for (auto& it : f->items) m = std::max(m, order_of_formula(it));
  return m;
}

bool is_disjunctive(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == Formula::Kind::And) {
    if (f->f1->kind != Formula::Kind::Le) return false;
    return is_disjunctive(f->f2);
  }
  if (!is_disjunctive(f->f1) || !is_disjunctive(f->f2)) return false;
  for (auto& it : f->items)
    if (!is_disjunctive(it)) return false;
  return true;
}

namespace {

// One leftmost-outermost beta pass; returns nullptr if no redex.
FormulaPtr beta_step(const FormulaPtr& f) {
  if (!f) return nullptr;
  if (f->kind == Formula::Kind::App &&
      f->f1->kind == Formula::Kind::Abs) {
    Subst s;
    s.emplace(f->f1->name, Binding(f->f2));
    return substitute(f->f1->f1, s);
  }
  if (f->kind == Formula::Kind::AppInt &&
      f->f1->kind == Formula::Kind::Abs) {
    Subst s;
    s.emplace(f->f1->name, Binding(f->e1));
    return substitute(f->f1->f1, s);
  }
  // descend
  if (auto r = beta_step(f->f1)) {
    auto g = std::make_shared<Formula>(f->kind);
    *g = *f;
    g->f1 = r;
    return g;
  }
  if (auto r = beta_step(f->f2)) {
    auto g = std::make_shared<Formula>(f->kind);
    *g = *f;
    g->f2 = r;
    return g;
  }
  for (size_t i = 0; i < f->items.size(); ++i) {
    if (auto r = beta_step(f->items[i])) {
      auto g = std::make_shared<Formula>(f->kind);
      *g = *f;
      g->items[i] = r;
      return g;
    }
  }
  return nullptr;
}

}  // namespace

FormulaPtr beta_normalize(const FormulaPtr& f, size_t fuel) {
  FormulaPtr cur = f;
  while (fuel--) {
    auto next = beta_step(cur);
    if (!next) return cur;
    cur = next;
  }
  return cur;
}

Int eval_int(const IntExprPtr& e, const std::map<std::string, Int>& env) {
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      return e->value;
    case IntExpr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end())
        throw UnboundVariable("unbound integer variable " + e->name);
      return it->second;
    }
    case IntExpr::Kind::Add:
      return eval_int(e->lhs, env) + eval_int(e->rhs, env);
    case IntExpr::Kind::Mul:
      return eval_int(e->lhs, env) * eval_int(e->rhs, env);
  }
  throw Error("unreachable");
}

Int eval_int(const IntExprPtr& e) {
  static const std::map<std::string, Int> empty;
  return eval_int(e, empty);
}

static bool closed_cmp(const FormulaPtr& f, bool want) {
  if (f->kind != Formula::Kind::Le) return false;
  if (!free_var_set(f->e1).empty() || !free_var_set(f->e2).empty())
    return false;
  return (eval_int(f->e1) <= eval_int(f->e2)) == want;
}

bool is_closed_false(const FormulaPtr& f) { return closed_cmp(f, false); }
bool is_closed_true(const FormulaPtr& f) { return closed_cmp(f, true); }

}  // namespace muhfl

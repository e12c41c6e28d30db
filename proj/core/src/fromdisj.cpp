#include "muhfl/fromdisj.hpp"

#include <functional>
#include <sstream>

#include "muhfl/ops.hpp"
#include "muhfl/printer.hpp"

namespace muhfl {

SortDecomp decomp_sort(const SortPtr& s) {
  if (s->kind == Sort::Kind::Prop) return {};
  if (s->kind != Sort::Kind::Arrow)
    throw SortMismatch("cannot decompose sort " + to_string(s));
  auto rest = decomp_sort(s->res);
  const SortPtr& a = s->arg;
  if (!rest.higher.empty() || order(a) > 0) {
    rest.higher.insert(rest.higher.begin(), a);
    return rest;
  }
  if (a->kind == Sort::Kind::Int) {
    ++rest.ints;
    return rest;
  }
  if (is_some_int_pred(a)) {
    ++rest.pred;
    return rest;
  }
  throw SortMismatch("argument sort " + to_string(a) +
                     " is neither int, int predicate, nor higher order");
}

int gar(const SortPtr& s) { return decomp_sort(s).pred; }

ParamSplit decomp_params(const std::vector<Param>& params,
                         const SortPtr& fsort) {
  // Mirror decomp_sort on the named parameter list.
  ParamSplit out;
  SortPtr rest = fsort;
  std::vector<std::pair<Param, SortPtr>> args;
  for (auto& p : params) {
    if (rest->kind != Sort::Kind::Arrow)
      throw ArityMismatch("more parameters than the declared sort allows");
    if (!sort_eq(rest->arg, p.sort))
      throw SortMismatch("parameter " + p.name + " sort mismatch");
    args.emplace_back(p, rest->arg);
    rest = rest->res;
  }
  size_t last_higher = 0;  // index after the last order>=1 parameter
  for (size_t i = 0; i < args.size(); ++i)
    if (order(args[i].second) > 0) last_higher = i + 1;
  for (size_t i = 0; i < args.size(); ++i) {
    const auto& [p, srt] = args[i];
    if (i < last_higher)
      out.higher.push_back(p);
    else if (srt->kind == Sort::Kind::Int)
      out.intvars.push_back(p);
    else if (is_some_int_pred(srt))
      out.predvars.push_back(p);
    else
      throw NotNormalized("parameter " + p.name + " has unsupported sort " +
                          to_string(srt));
  }
  return out;
}

std::vector<SortPtr> lower_sort_components(const SortPtr& s, int k, int M) {
  if (s->kind == Sort::Kind::Int) return {int_sort()};
  auto d = decomp_sort(s);
  auto mk_comp = [&](int inner_k) {
    SortPtr t = int_arrows(d.ints + M, prop_sort());
    for (size_t i = d.higher.size(); i-- > 0;) {
      const SortPtr& h = d.higher[i];
      SortPtr a = h->kind == Sort::Kind::Int
                      ? h
                      : product(lower_sort_components(h, inner_k, M));
      t = arrow(a, t);
    }
    return t;
  };
  std::vector<SortPtr> out;
  SortPtr full = mk_comp(2);
  SortPtr reduced = mk_comp(1);
  for (int i = 0; i < k; ++i) out.push_back(full);
  for (int i = 0; i < d.pred; ++i) out.push_back(reduced);
  return out;
}

SortPtr lower_sort(const SortPtr& s, int k, int M) {
  return product(lower_sort_components(s, k, M));
}

namespace {

std::string comp_name(const std::string& base, int j) {
  return j < 0 ? base + "$m" : base + "$" + std::to_string(j);
}

FormulaPtr app_int_vars(FormulaPtr f, const std::vector<std::string>& vs) {
  for (auto& v : vs) f = mk_app_int(std::move(f), ivar(v));
  return f;
}

FormulaPtr lam_ints(const std::vector<std::string>& vs, FormulaPtr body) {
  for (size_t i = vs.size(); i-- > 0;)
    body = mk_abs(vs[i], int_sort(), std::move(body));
  return body;
}

std::vector<std::string> fresh_ints(const std::string& base, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(NameSupply::fresh(base));
  return out;
}

FormulaPtr eq_chain(const std::vector<std::string>& zs,
                    const std::vector<std::string>& ws) {
  FormulaPtr out;
  for (size_t p = 0; p < zs.size(); ++p) {
    auto eq = mk_and(mk_le(ivar(zs[p]), ivar(ws[p])),
                     mk_le(ivar(ws[p]), ivar(zs[p])));
    out = out ? mk_and(out, eq) : eq;
  }
  return out ? out : mk_true();
}

struct Lowering {
  const EquationSystem& es;
  int M;
  LowerCtx ctx;
  TypeEnv base;  // original sorts of fixpoint vars, gamma, and predvars

  Lowering(const EquationSystem& system, int maxar, LowerCtx c)
      : es(system), M(maxar), ctx(std::move(c)) {
    for (auto& [n, s] : es.env) base.push(n, s);
    for (auto& [n, s] : ctx.gamma) base.push(n, s);
    for (auto& x : ctx.predvars) base.push(x, int_arrows(M, prop_sort()));
  }

  int k() const { return static_cast<int>(ctx.predvars.size()); }

  SortPtr sort_of(const FormulaPtr& f) {
    TypeEnv env = base;
    return typecheck(f, env);
  }

  // Bundle layout: [0] = star, [1] = comp 0, [1+i] = comp i (i = 1..k),
  // [1+k+i] = comp k+i (i = 1..gar(tau)).
  std::vector<FormulaPtr> lower(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Var:
        return lower_var(f);
      case Formula::Kind::And:
        return lower_guard(f);
      case Formula::Kind::Or:
        return lower_disj(f);
      case Formula::Kind::App:
        return lower_app(f);
      case Formula::Kind::AppInt: {
        auto bundle = lower(f->f1);
        for (auto& b : bundle) b = mk_app_int(b, f->e1);
        return bundle;
      }
      default:
        throw GrammarViolation("body grammar violation at " + to_string(f));
    }
  }

  std::vector<FormulaPtr> lower_var(const FormulaPtr& f) {
    const std::string& x = f->name;
    for (int i = 1; i <= k(); ++i) {
      if (ctx.predvars[static_cast<size_t>(i - 1)] != x) continue;
      std::vector<FormulaPtr> out;
      for (int j = -1; j <= k(); ++j) {
        auto zs = fresh_ints("z", M);
        auto ws = fresh_ints("w", M);
        auto body = j == i ? eq_chain(zs, ws) : mk_false();
        out.push_back(lam_ints(zs, lam_ints(ws, body)));
      }
      return out;
    }
    if (es.env_lookup(x)) {
      int m = gar(*es.env_lookup(x));
      std::vector<FormulaPtr> out;
      out.push_back(mk_var(comp_name(x, 0)));
      for (int j = 0; j <= k(); ++j) out.push_back(mk_var(comp_name(x, 0)));
      for (int i = 1; i <= m; ++i) out.push_back(mk_var(comp_name(x, i)));
      return out;
    }
    for (auto& [n, s] : ctx.gamma) {
      if (n != x) continue;
      if (s->kind == Sort::Kind::Int)
        throw GrammarViolation("integer variable " + x + " used as formula");
      int m = gar(s);
      std::vector<FormulaPtr> out;
      out.push_back(mk_var(comp_name(x, -1)));
      for (int j = 0; j <= k(); ++j) out.push_back(mk_var(comp_name(x, 0)));
      for (int i = 1; i <= m; ++i) out.push_back(mk_var(comp_name(x, i)));
      return out;
    }
    throw UnboundVariable("unbound variable " + x + " during lowering");
  }

  std::vector<FormulaPtr> lower_guard(const FormulaPtr& f) {
    if (f->f1->kind != Formula::Kind::Le)
      throw GrammarViolation("conjunction guard must be a comparison");
    auto inner = lower(f->f2);
    std::vector<FormulaPtr> out;
    for (auto& g : inner) {
      auto zs = fresh_ints("z", M);
      out.push_back(
          lam_ints(zs, mk_and(f->f1, app_int_vars(g, zs))));
    }
    return out;
  }

  std::vector<FormulaPtr> lower_disj(const FormulaPtr& f) {
    auto a = lower(f->f1);
    auto b = lower(f->f2);
    std::vector<FormulaPtr> out;
    for (size_t j = 0; j < a.size(); ++j) {
      auto zs = fresh_ints("z", M);
      out.push_back(lam_ints(
          zs, mk_or(app_int_vars(a[j], zs), app_int_vars(b[j], zs))));
    }
    return out;
  }

  std::vector<FormulaPtr> lower_app(const FormulaPtr& f) {
    auto fun_sort = sort_of(f->f1);
    if (fun_sort->kind != Sort::Kind::Arrow)
      throw GrammarViolation("application of non-function during lowering");
    const SortPtr& s0 = fun_sort->arg;
    const SortPtr& tau = fun_sort->res;
    bool arg_is_pred = order(s0) == 0 && s0->kind == Sort::Kind::Arrow;
    if (arg_is_pred && !is_int_pred(s0, M))
      throw NotNormalized("int-predicate argument of arity != maxar: " +
                          to_string(s0));
    auto phi = lower(f->f1);
    auto psi = lower(f->f2);
    if (arg_is_pred && decomp_sort(tau).higher.empty()) {
      // Tr-AppG
      auto dt = decomp_sort(tau);
      int m = gar(fun_sort);  // = dt.pred + 1
      int p = dt.ints;
      std::vector<FormulaPtr> out;
      for (int j = 0; j <= k() + 1; ++j) {
        auto zs = fresh_ints("z", p);
        auto ws = fresh_ints("w", M);
        auto us = fresh_ints("u", M);
        std::vector<std::string> zw = zs;
        zw.insert(zw.end(), ws.begin(), ws.end());
        std::vector<std::string> zu = zs;
        zu.insert(zu.end(), us.begin(), us.end());
        std::vector<std::string> uw = us;
        uw.insert(uw.end(), ws.begin(), ws.end());
        auto chase = mk_and(app_int_vars(phi[static_cast<size_t>(k() + 2)], zu),
                            app_int_vars(psi[static_cast<size_t>(j)], uw));
        for (size_t q = us.size(); q-- > 0;) chase = mk_exists(us[q], chase);
        auto body = mk_or(app_int_vars(phi[static_cast<size_t>(j)], zw), chase);
        out.push_back(lam_ints(zs, lam_ints(ws, body)));
      }
      for (int i = 2; i <= m; ++i)
        out.push_back(phi[static_cast<size_t>(k() + 1 + i)]);
      return out;
    }
    // Tr-App
    int m = gar(fun_sort);
    int mp = gar(s0);
    auto trail = [&](std::vector<FormulaPtr> head) {
      for (int i = 1; i <= mp; ++i)
        head.push_back(psi[static_cast<size_t>(k() + 1 + i)]);
      return mk_tuple(std::move(head));
    };
    std::vector<FormulaPtr> out;
    out.push_back(mk_app(phi[0], trail({psi[0], psi[1]})));
    out.push_back(mk_app(phi[1], trail({psi[1], psi[1]})));
    for (int i = 1; i <= k(); ++i)
      out.push_back(mk_app(phi[static_cast<size_t>(1 + i)],
                           trail({psi[static_cast<size_t>(1 + i)], psi[1]})));
    for (int i = 1; i <= m; ++i)
      out.push_back(
          mk_app(phi[static_cast<size_t>(1 + k() + i)], trail({psi[1]})));
    return out;
  }
};

}  // namespace

std::vector<FormulaPtr> lower_formula(const FormulaPtr& f,
                                      const LowerCtx& ctx) {
  Lowering lo(*ctx.es, ctx.M, ctx);
  return lo.lower(f);
}

namespace {

std::vector<Definition> lower_def(const Definition& d,
                                  const EquationSystem& es, int M) {
  auto* fsort = es.env_lookup(d.name);
  if (!fsort) throw UnboundVariable("definition " + d.name + " not in %ENV");
  auto split = decomp_params(d.flat_params(), *fsort);
  for (auto& x : split.predvars)
    if (!is_int_pred(x.sort, M))
      throw NotNormalized("predicate parameter " + x.name +
                          " does not have arity maxar");

  LowerCtx ctx;
  ctx.es = &es;
  ctx.M = M;
  for (auto& p : split.higher) ctx.gamma.emplace_back(p.name, p.sort);
  for (auto& p : split.intvars) ctx.gamma.emplace_back(p.name, int_sort());
  for (auto& p : split.predvars) ctx.predvars.push_back(p.name);
  int k = static_cast<int>(split.predvars.size());

  auto bundle = lower_formula(d.body, ctx);

  auto make_groups = [&](int which) {  // which: 2 = full tuples, 1 = reduced
    std::vector<ParamGroup> groups;
    for (auto& p : split.higher) {
      if (p.sort->kind == Sort::Kind::Int) {
        groups.push_back(single_param(p.name, p.sort));
        continue;
      }
      auto comps = lower_sort_components(p.sort, which, M);
      ParamGroup g;
      g.is_tuple = comps.size() > 1;
      int g_gar = gar(p.sort);
      // Component names: y$m (full only), then y$0 .. y$gar.
      size_t idx = 0;
      if (which == 2) g.members.push_back({comp_name(p.name, -1), comps[idx++]});
      for (int j = 0; j <= g_gar; ++j)
        g.members.push_back({comp_name(p.name, j), comps[idx++]});
      groups.push_back(std::move(g));
    }
    for (auto& p : split.intvars)
      groups.push_back(single_param(p.name, p.sort));
    return groups;
  };

  std::vector<Definition> out;
  Definition d0;
  d0.name = comp_name(d.name, 0);
  d0.params = make_groups(2);
  d0.body = bundle[0];
  out.push_back(std::move(d0));
  for (int i = 1; i <= k; ++i) {
    Definition di;
    di.name = comp_name(d.name, i);
    di.params = make_groups(1);
    di.body = bundle[static_cast<size_t>(1 + i)];
    out.push_back(std::move(di));
  }
  return out;
}

}  // namespace

EquationSystem lower_system(const EquationSystem& es, const LowerOptions& opts,
                            LowerStats* stats) {
  check_normalized(es);
  int M = *es.maxar;
  LowerStats st;
  st.order_in = order_of_system(es);
  st.defs_in = es.defs.size();
  st.nodes_in = system_node_count(es);

  EquationSystem out;
  out.maxar = M;
  for (auto& [n, s] : es.env) {
    auto comps = lower_sort_components(s, 1, M);
    for (size_t i = 0; i < comps.size(); ++i)
      out.env.emplace_back(comp_name(n, static_cast<int>(i)), comps[i]);
  }
  for (auto& d : es.defs)
    for (auto& nd : lower_def(d, es, M)) out.defs.push_back(std::move(nd));

  // main: S (\z1 .. zM . true)  becomes  exists z1 .. zM . S$1 z1 .. zM
  std::vector<std::string> zs;
  FormulaPtr arg = es.main->f2;
  for (int i = 0; i < M; ++i) {
    zs.push_back(arg->name);
    arg = arg->f1;
  }
  auto m = app_int_vars(mk_var(comp_name(es.main->f1->name, 1)), zs);
  for (size_t i = zs.size(); i-- > 0;) m = mk_exists(zs[i], m);
  out.main = m;

  typecheck_system(out);  // the typing part of the soundness statement
  if (opts.simplify) out = simplify_system(out);
  if (opts.flatten) out = flatten_tuples(out);

  st.order_out = order_of_system(out);
  st.defs_out = out.defs.size();
  st.nodes_out = system_node_count(out);
  if (stats) *stats = st;
  return out;
}

// --- tuple flattening --------------------------------------------------------

namespace {

SortPtr flatten_sort(const SortPtr& s) {
  switch (s->kind) {
    case Sort::Kind::Int:
    case Sort::Kind::Prop:
      return s;
    case Sort::Kind::Arrow: {
      auto res = flatten_sort(s->res);
      if (s->arg->kind == Sort::Kind::Product) {
        for (size_t i = s->arg->comps.size(); i-- > 0;)
          res = arrow(flatten_sort(s->arg->comps[i]), res);
        return res;
      }
      return arrow(flatten_sort(s->arg), res);
    }
    case Sort::Kind::Product:
      throw HigherOrderTupleEscape("product sort in non-argument position");
  }
  return s;
}

FormulaPtr flatten_formula(const FormulaPtr& f) {
  if (!f) return f;
  if (f->kind == Formula::Kind::Tuple)
    throw HigherOrderTupleEscape("tuple outside of argument position: " +
                                 to_string(f));
  if (f->kind == Formula::Kind::App &&
      f->f2->kind == Formula::Kind::Tuple) {
    auto g = flatten_formula(f->f1);
    for (auto& it : f->f2->items) g = mk_app(g, flatten_formula(it));
    return g;
  }
  auto g = std::make_shared<Formula>(f->kind);
  *g = *f;
  if (g->sort) g->sort = flatten_sort(g->sort);
  g->f1 = flatten_formula(f->f1);
  g->f2 = flatten_formula(f->f2);
  g->items.clear();
  for (auto& it : f->items) g->items.push_back(flatten_formula(it));
  return g;
}

}  // namespace

EquationSystem flatten_tuples(const EquationSystem& es) {
  EquationSystem out;
  out.maxar = es.maxar;
  for (auto& [n, s] : es.env) out.env.emplace_back(n, flatten_sort(s));
  for (auto& d : es.defs) {
    Definition nd;
    nd.name = d.name;
    for (auto& g : d.params)
      for (auto& p : g.members)
        nd.params.push_back(single_param(p.name, flatten_sort(p.sort)));
    nd.body = flatten_formula(d.body);
    out.defs.push_back(std::move(nd));
  }
  out.main = flatten_formula(es.main);
  return out;
}

// --- simplification ----------------------------------------------------------

namespace {

IntExprPtr fold_int(const IntExprPtr& e) {
  if (!e || e->kind == IntExpr::Kind::Lit || e->kind == IntExpr::Kind::Var)
    return e;
  auto l = fold_int(e->lhs);
  auto r = fold_int(e->rhs);
  if (l->kind == IntExpr::Kind::Lit && r->kind == IntExpr::Kind::Lit)
    return ilit(e->kind == IntExpr::Kind::Add ? Int(l->value + r->value)
                                              : Int(l->value * r->value));
  return e->kind == IntExpr::Kind::Add ? iadd(l, r) : imul(l, r);
}

bool syn_false(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Le) return is_closed_false(f);
  if (f->kind == Formula::Kind::And) return syn_false(f->f1);
  if (f->kind == Formula::Kind::Abs) return syn_false(f->f1);
  return false;
}

// Match u = e (encoded as Le(u,e) /\ Le(e,u) in either orientation) where
// u does not occur in e.
IntExprPtr match_eq(const FormulaPtr& f, const std::string& u) {
  if (f->kind != Formula::Kind::And) return nullptr;
  const auto& a = f->f1;
  const auto& b = f->f2;
  if (a->kind != Formula::Kind::Le || b->kind != Formula::Kind::Le)
    return nullptr;
  auto is_u = [&](const IntExprPtr& e) {
    return e->kind == IntExpr::Kind::Var && e->name == u;
  };
  auto same = [](const IntExprPtr& x, const IntExprPtr& y) {
    return to_string(x) == to_string(y);
  };
  // a: u <= e, b: e <= u  (or swapped)
  for (int flip = 0; flip < 2; ++flip) {
    const auto& p = flip ? b : a;
    const auto& q = flip ? a : b;
    if (is_u(p->e1) && is_u(q->e2) && same(p->e2, q->e1) &&
        !free_var_set(p->e2).count(u))
      return p->e2;
  }
  return nullptr;
}

void conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Formula::Kind::And) {
    conjuncts(f->f1, out);
    conjuncts(f->f2, out);
  } else {
    out.push_back(f);
  }
}

FormulaPtr conjoin(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return mk_true();
  FormulaPtr out = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) out = mk_and(fs[i], out);
  return out;
}

FormulaPtr simp(const FormulaPtr& f) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Le:
      return mk_le(fold_int(f->e1), fold_int(f->e2));
    case Formula::Kind::And: {
      auto a = simp(f->f1);
      auto b = simp(f->f2);
      if (is_closed_true(a)) return b;
      if (is_closed_true(b)) return a;
      if (syn_false(a) || syn_false(b)) return mk_false();
      return mk_and(a, b);
    }
    case Formula::Kind::Or: {
      auto a = simp(f->f1);
      auto b = simp(f->f2);
      if (syn_false(a)) return b;
      if (syn_false(b)) return a;
      return mk_or(a, b);
    }
    case Formula::Kind::Exists: {
      auto body = simp(f->f1);
      if (syn_false(body)) return mk_false();
      // exists u . (... /\ u = e /\ ...)  ~~>  [e/u](...)
      std::vector<FormulaPtr> cs;
      conjuncts(body, cs);
      for (size_t i = 0; i < cs.size(); ++i) {
        // Pair off the two <= halves when they form u = e.
        if (auto e = match_eq(cs[i], f->name)) {
          std::vector<FormulaPtr> rest;
          for (size_t j = 0; j < cs.size(); ++j)
            if (j != i) rest.push_back(cs[j]);
          Subst s;
          s.emplace(f->name, Binding(e));
          return simp(substitute(conjoin(rest), s));
        }
        if (i + 1 < cs.size()) {
          if (auto e = match_eq(mk_and(cs[i], cs[i + 1]), f->name)) {
            std::vector<FormulaPtr> rest;
            for (size_t j = 0; j < cs.size(); ++j)
              if (j != i && j != i + 1) rest.push_back(cs[j]);
            Subst s;
            s.emplace(f->name, Binding(e));
            return simp(substitute(conjoin(rest), s));
          }
        }
      }
      return mk_exists(f->name, body);
    }
    default: {
      auto g = std::make_shared<Formula>(f->kind);
      *g = *f;
      g->e1 = fold_int(f->e1);
      g->e2 = fold_int(f->e2);
      g->f1 = simp(f->f1);
      g->f2 = simp(f->f2);
      g->items.clear();
      for (auto& it : f->items) g->items.push_back(simp(it));
      return g;
    }
  }
}

}  // namespace

FormulaPtr simplify_formula(const FormulaPtr& f) {
  auto cur = beta_normalize(f);
  for (int i = 0; i < 50; ++i) {
    auto next = beta_normalize(simp(cur));
    if (alpha_eq(next, cur)) return next;
    cur = next;
  }
  return cur;
}

EquationSystem simplify_system(const EquationSystem& es) {
  EquationSystem out = es;
  for (auto& d : out.defs) d.body = simplify_formula(d.body);
  out.main = simplify_formula(out.main);
  return out;
}

std::string LowerStats::to_text() const {
  std::ostringstream s;
  s << "order_in=" << order_in << "\norder_out=" << order_out
    << "\ndefs_in=" << defs_in << "\ndefs_out=" << defs_out
    << "\nnodes_in=" << nodes_in << "\nnodes_out=" << nodes_out << "\n";
  return s.str();
}

}  // namespace muhfl

#include <map>

#include "muhfl/eqsys.hpp"
#include "muhfl/ops.hpp"
#include "muhfl/printer.hpp"
#include "muhfl/semantics.hpp"

namespace muhfl {

namespace {

FormulaPtr apply_zeros(FormulaPtr f, int n) {
  for (int i = 0; i < n; ++i) f = mk_app_int(std::move(f), ilit(0));
  return f;
}

// --- continuation threading ------------------------------------------------
// Replace each unguarded atom a by a /\ t 0 .. 0, so that instantiating t
// with \z1..zM.true recovers the original formula.

FormulaPtr thread_cont(const FormulaPtr& f, const std::string& t, int M) {
  switch (f->kind) {
    case Formula::Kind::Le:
      return mk_and(f, apply_zeros(mk_var(t), M));
    case Formula::Kind::And:
      if (f->f1->kind != Formula::Kind::Le)
        throw NotDisjunctive("conjunction guard is not a comparison");
      return mk_and(f->f1, thread_cont(f->f2, t, M));
    case Formula::Kind::Or:
      return mk_or(thread_cont(f->f1, t, M), thread_cont(f->f2, t, M));
    case Formula::Kind::Mu:
      return mk_mu(f->name, f->sort, thread_cont(f->f1, t, M));
    case Formula::Kind::Abs:
      return mk_abs(f->name, f->sort, thread_cont(f->f1, t, M));
    case Formula::Kind::App:
      return mk_app(thread_cont(f->f1, t, M), thread_cont(f->f2, t, M));
    case Formula::Kind::AppInt:
      return mk_app_int(thread_cont(f->f1, t, M), f->e1);
    case Formula::Kind::Var:
      return f;
    default:
      throw GrammarViolation("unexpected node during continuation threading: " +
                             to_string(f));
  }
}

// --- arity padding ----------------------------------------------------------
// Every order-0 argument position becomes int^M -> prop.  Mismatching uses
// are mended by dummy arguments: missing trailing ints are supplied as 0 and
// ignored extras are dropped by an eta-wrapper, which preserves meaning
// because every padded predicate ignores its padding arguments.

SortPtr pad_arg(const SortPtr& s, int M);

SortPtr pad_sort(const SortPtr& s, int M) {
  if (s->kind == Sort::Kind::Arrow)
    return arrow(pad_arg(s->arg, M), pad_sort(s->res, M));
  return s;
}

SortPtr pad_arg(const SortPtr& s, int M) {
  if (s->kind == Sort::Kind::Int) return s;
  if (order(s) == 0) return int_arrows(M, prop_sort());
  return pad_sort(s, M);
}

FormulaPtr coerce(FormulaPtr f, const SortPtr& have, const SortPtr& want) {
  if (sort_eq(have, want)) return f;
  if (!is_some_int_pred(have) || !is_some_int_pred(want))
    throw SortMismatch("cannot pad " + to_string(have) + " to " +
                       to_string(want));
  int a = arity(have), b = arity(want);
  if (b == 0) return apply_zeros(std::move(f), a);
  std::vector<std::string> ws;
  for (int i = 0; i < b; ++i) ws.push_back(NameSupply::fresh("w"));
  for (int i = 0; i < std::min(a, b); ++i)
    f = mk_app_int(std::move(f), ivar(ws[i]));
  if (a > b) f = apply_zeros(std::move(f), a - b);
  for (int i = b; i-- > 0;) f = mk_abs(ws[i], int_sort(), std::move(f));
  return f;
}

struct Padded {
  FormulaPtr f;
  SortPtr orig;
  SortPtr padded;
};

struct Padder {
  int M;
  // name -> (original sort, padded sort); scoped by save/restore.
  std::map<std::string, std::pair<SortPtr, SortPtr>> env;

  Padded run(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Var: {
        auto it = env.find(f->name);
        if (it == env.end())
          throw UnboundVariable("unbound variable " + f->name +
                                " during padding");
        return {f, it->second.first, it->second.second};
      }
      case Formula::Kind::Le:
        return {f, prop_sort(), prop_sort()};
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        auto a = run(f->f1);
        auto b = run(f->f2);
        auto fa = coerce(a.f, a.padded, prop_sort());
        auto fb = coerce(b.f, b.padded, prop_sort());
        auto g = f->kind == Formula::Kind::And ? mk_and(fa, fb)
                                               : mk_or(fa, fb);
        return {g, prop_sort(), prop_sort()};
      }
      case Formula::Kind::Mu: {
        auto tn = pad_sort(f->sort, M);
        auto b = scoped(f->name, f->sort, tn, f->f1);
        auto body = coerce(b.f, b.padded, tn);
        return {mk_mu(f->name, tn, body), f->sort, tn};
      }
      case Formula::Kind::Abs: {
        auto sn = pad_arg(f->sort, M);
        auto b = scoped(f->name, f->sort, sn, f->f1);
        auto bt = pad_sort(b.orig, M);
        auto body = coerce(b.f, b.padded, bt);
        return {mk_abs(f->name, sn, body), arrow(f->sort, b.orig),
                arrow(sn, bt)};
      }
      case Formula::Kind::Exists: {
        auto b = scoped(f->name, int_sort(), int_sort(), f->f1);
        auto body = coerce(b.f, b.padded, prop_sort());
        return {mk_exists(f->name, body), prop_sort(), prop_sort()};
      }
      case Formula::Kind::App: {
        auto g = run(f->f1);
        if (g.padded->kind != Sort::Kind::Arrow)
          throw ArityMismatch("application of non-function during padding");
        auto a = run(f->f2);
        auto arg = coerce(a.f, a.padded, g.padded->arg);
        return {mk_app(g.f, arg), g.orig->res, g.padded->res};
      }
      case Formula::Kind::AppInt: {
        auto g = run(f->f1);
        if (g.padded->kind != Sort::Kind::Arrow ||
            g.padded->arg->kind != Sort::Kind::Int)
          throw ArityMismatch("integer application mismatch during padding");
        return {mk_app_int(g.f, f->e1), g.orig->res, g.padded->res};
      }
      default:
        throw GrammarViolation("unexpected node during padding: " +
                               to_string(f));
    }
  }

  Padded scoped(const std::string& x, SortPtr so, SortPtr sn,
                const FormulaPtr& body) {
    auto it = env.find(x);
    std::optional<std::pair<SortPtr, SortPtr>> old;
    if (it != env.end()) old = it->second;
    env[x] = {std::move(so), std::move(sn)};
    auto r = run(body);
    if (old) env[x] = *old; else env.erase(x);
    return r;
  }
};

// --- lambda lifting ---------------------------------------------------------

struct Lifter {
  int M;
  std::vector<Definition> defs;
  std::vector<std::pair<std::string, SortPtr>> def_env;
  std::map<std::string, SortPtr> globals;

  FormulaPtr lift(const FormulaPtr& f, std::map<std::string, SortPtr>& scope) {
    switch (f->kind) {
      case Formula::Kind::Mu:
        return close(f->name, f, f->sort, scope);
      case Formula::Kind::Abs:
        // Anonymous lambdas cannot mention their own definition name, so a
        // placeholder recursion sort is fine.
        return close(NameSupply::fresh("lift"), f, prop_sort(), scope);
      case Formula::Kind::Var:
      case Formula::Kind::Le:
        return f;
      case Formula::Kind::And:
        return mk_and(lift(f->f1, scope), lift(f->f2, scope));
      case Formula::Kind::Or:
        return mk_or(lift(f->f1, scope), lift(f->f2, scope));
      case Formula::Kind::App:
        return mk_app(lift(f->f1, scope), lift(f->f2, scope));
      case Formula::Kind::AppInt:
        return mk_app_int(lift(f->f1, scope), f->e1);
      default:
        throw GrammarViolation("unexpected node during lifting: " +
                               to_string(f));
    }
  }

  // Turn the closure f (a mu-term named `name`, or an anonymous lambda) into
  // a top-level definition over its free variables, and return the
  // definition name applied to those variables.
  FormulaPtr close(const std::string& name, const FormulaPtr& f,
                   const SortPtr& rec_sort,
                   std::map<std::string, SortPtr>& scope) {
    // Free variables, excluding names that are already definitions.
    std::vector<Param> closed;
    for (auto& v : free_vars(f)) {
      if (globals.count(v)) continue;
      auto it = scope.find(v);
      if (it == scope.end())
        throw UnboundVariable("unbound variable " + v + " during lifting");
      closed.push_back({v, it->second});
    }
    FormulaPtr head = mk_var(name);
    for (auto& p : closed)
      head = p.sort->kind == Sort::Kind::Int
                 ? mk_app_int(head, ivar(p.name))
                 : mk_app(head, mk_var(p.name));

    FormulaPtr body = f;
    if (f->kind == Formula::Kind::Mu) {
      Subst s;
      s.emplace(f->name, Binding(head));
      body = substitute(f->f1, s);
    }
    // The definition's sort is its closed parameters followed by the
    // recursion annotation; registering it now lets nested closures that
    // mention this name typecheck their cores.
    SortPtr self = rec_sort;
    for (size_t i = closed.size(); i-- > 0;) self = arrow(closed[i].sort, self);
    globals[name] = self;

    std::vector<Param> params = closed;
    std::vector<std::pair<std::string, std::optional<SortPtr>>> saved;
    auto push_scope = [&](const std::string& n, const SortPtr& s) {
      auto it = scope.find(n);
      saved.emplace_back(n, it == scope.end()
                                ? std::optional<SortPtr>{}
                                : std::optional<SortPtr>{it->second});
      scope[n] = s;
    };
    while (body->kind == Formula::Kind::Abs) {
      params.push_back({body->name, body->sort});
      push_scope(body->name, body->sort);
      body = body->f1;
    }
    body = lift(body, scope);
    // Eta-expand partially applied cores so the body has sort prop.
    auto core_sort = [&]() {
      TypeEnv te;
      for (auto& [n, s] : globals)
        if (s) te.push(n, s);
      for (auto& [n, s] : scope) te.push(n, s);
      return typecheck(body, te);
    };
    for (auto s = core_sort(); s->kind == Sort::Kind::Arrow;
         s = s->res) {
      std::string w = NameSupply::fresh(
          s->arg->kind == Sort::Kind::Int ? "z" : "x");
      params.push_back({w, s->arg});
      push_scope(w, s->arg);
      body = s->arg->kind == Sort::Kind::Int ? mk_app_int(body, ivar(w))
                                             : mk_app(body, mk_var(w));
    }
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      if (it->second) scope[it->first] = *it->second;
      else scope.erase(it->first);
    }

    SortPtr dsort = prop_sort();
    for (size_t i = params.size(); i-- > 0;)
      dsort = arrow(params[i].sort, dsort);
    globals[name] = dsort;
    def_env.emplace_back(name, dsort);
    Definition d;
    d.name = name;
    for (auto& p : params) d.params.push_back(single_param(p.name, p.sort));
    d.body = body;
    defs.push_back(std::move(d));
    return head;
  }
};

}  // namespace

EquationSystem normalize(const FormulaPtr& input,
                         std::optional<int> maxar_override) {
  auto f = desugar(input);
  check_closed_prop(f);
  if (!is_disjunctive(f))
    throw NotDisjunctive("input formula is not disjunctive");
  f = encode_exists(f);
  f = freshen(f);
  int M = compute_maxar(f);
  if (maxar_override) {
    if (*maxar_override < M)
      throw ArityMismatch("requested maxar " + std::to_string(*maxar_override) +
                          " is below the required " + std::to_string(M));
    M = *maxar_override;
  }

  std::string t = NameSupply::fresh("t");
  auto threaded = thread_cont(f, t, M);

  Padder padder{M, {}};
  auto tsort = int_arrows(M, prop_sort());
  padder.env[t] = {tsort, tsort};
  auto padded = padder.run(threaded);
  auto body0 = coerce(padded.f, padded.padded, prop_sort());

  Lifter lifter{M, {}, {}, {}};
  std::map<std::string, SortPtr> scope{{t, tsort}};
  auto body = lifter.lift(body0, scope);

  EquationSystem es;
  es.maxar = M;
  std::string S = NameSupply::fresh("S");
  es.env.emplace_back(S, arrow(tsort, prop_sort()));
  for (auto& e : lifter.def_env) es.env.push_back(e);
  Definition sd;
  sd.name = S;
  sd.params.push_back(single_param(t, tsort));
  sd.body = body;
  es.defs.push_back(std::move(sd));
  for (auto& d : lifter.defs) es.defs.push_back(d);
  FormulaPtr arg = mk_true();
  std::vector<std::string> zs;
  for (int i = 0; i < M; ++i) zs.push_back(NameSupply::fresh("z"));
  for (int i = M; i-- > 0;) arg = mk_abs(zs[i], int_sort(), arg);
  es.main = mk_app(mk_var(S), arg);

  check_normalized(es);
  return es;
}

}  // namespace muhfl

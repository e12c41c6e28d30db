#include "muhfl/eqsys.hpp"

#include <functional>
#include <sstream>

#include "muhfl/ops.hpp"
#include "muhfl/printer.hpp"

namespace muhfl {

ParamGroup single_param(std::string name, SortPtr sort) {
  ParamGroup g;
  g.members.push_back({std::move(name), std::move(sort)});
  return g;
}

std::vector<Param> Definition::flat_params() const {
  std::vector<Param> out;
  for (auto& g : params)
    for (auto& p : g.members) out.push_back(p);
  return out;
}

const SortPtr* EquationSystem::env_lookup(const std::string& name) const {
  for (auto& [n, s] : env)
    if (n == name) return &s;
  return nullptr;
}

const Definition* EquationSystem::find_def(const std::string& name) const {
  for (auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

void typecheck_system(const EquationSystem& es) {
  TypeEnv base;
  for (auto& [n, s] : es.env) base.push(n, s);
  for (auto& d : es.defs) {
    auto* ds = es.env_lookup(d.name);
    if (!ds) throw UnboundVariable("definition " + d.name + " missing in %ENV");
    TypeEnv env = base;
    SortPtr rest = *ds;
    for (auto& g : d.params) {
      if (rest->kind != Sort::Kind::Arrow)
        throw ArityMismatch("too many parameters for " + d.name);
      if (g.is_tuple && g.members.size() > 1) {
        if (rest->arg->kind != Sort::Kind::Product ||
            rest->arg->comps.size() != g.members.size())
          throw SortMismatch("tuple parameter of " + d.name +
                             " does not match product argument sort");
        for (size_t i = 0; i < g.members.size(); ++i) {
          if (!sort_eq(rest->arg->comps[i], g.members[i].sort))
            throw SortMismatch("tuple member " + g.members[i].name +
                               " sort mismatch in " + d.name);
          env.push(g.members[i].name, g.members[i].sort);
        }
      } else {
        if (!sort_eq(rest->arg, g.members[0].sort))
          throw SortMismatch("parameter " + g.members[0].name + " of " +
                             d.name + " has sort " +
                             to_string(g.members[0].sort) +
                             " but declaration expects " + to_string(rest->arg));
        env.push(g.members[0].name, g.members[0].sort);
      }
      rest = rest->res;
    }
    auto bs = typecheck(d.body, env);
    if (!sort_eq(bs, rest))
      throw SortMismatch("body of " + d.name + " has sort " + to_string(bs) +
                         ", expected " + to_string(rest));
  }
  TypeEnv env = base;
  auto ms = typecheck(es.main, env);
  if (ms->kind != Sort::Kind::Prop)
    throw NotProp("main formula has sort " + to_string(ms));
  for (auto& v : free_vars(es.main))
    if (!es.env_lookup(v)) throw NotClosed("main mentions undefined " + v);
}

int order_of_system(const EquationSystem& es) {
  int m = 0;
  for (auto& [n, s] : es.env) {
    (void)n;
    m = std::max(m, order(s));
  }
  return m;
}

namespace {

void fvf_rec(const FormulaPtr& f, std::set<std::string>& bound,
             std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Var:
      if (!bound.count(f->name)) out.insert(f->name);
      return;
    case Formula::Kind::Or:
      fvf_rec(f->f1, bound, out);
      fvf_rec(f->f2, bound, out);
      return;
    case Formula::Kind::And:
      // A guard that is literally false kills the dependency.
      if (is_closed_false(f->f1)) return;
      fvf_rec(f->f2, bound, out);
      return;
    case Formula::Kind::App:
      fvf_rec(f->f1, bound, out);
      fvf_rec(f->f2, bound, out);
      return;
    case Formula::Kind::AppInt:
      fvf_rec(f->f1, bound, out);
      return;
    case Formula::Kind::Le:
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Abs:
    case Formula::Kind::Exists: {
      bool was = bound.count(f->name) > 0;
      bound.insert(f->name);
      fvf_rec(f->f1, bound, out);
      if (!was) bound.erase(f->name);
      return;
    }
    default:
      if (f->f1) fvf_rec(f->f1, bound, out);
      if (f->f2) fvf_rec(f->f2, bound, out);
      for (auto& it : f->items) fvf_rec(it, bound, out);
  }
}

}  // namespace

std::set<std::string> fvf(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  fvf_rec(f, bound, out);
  return out;
}

std::map<std::string, std::set<std::string>> dep_graph(
    const EquationSystem& es) {
  std::map<std::string, std::set<std::string>> g;
  for (auto& d : es.defs) {
    std::set<std::string> deps;
    for (auto& v : fvf(d.body))
      if (es.env_lookup(v)) deps.insert(v);
    g[d.name] = std::move(deps);
  }
  return g;
}

bool recursion_free(const EquationSystem& es) {
  auto g = dep_graph(es);
  // DFS cycle detection. 0 = unseen, 1 = on stack, 2 = done.
  std::map<std::string, int> state;
  std::function<bool(const std::string&)> cyc = [&](const std::string& n) {
    int& st = state[n];
    if (st == 1) return true;
    if (st == 2) return false;
    st = 1;
    for (auto& m : g[n])
      if (g.count(m) && cyc(m)) return true;
    st = 2;
    return false;
  };
  for (auto& [n, d] : g) {
    (void)d;
    if (cyc(n)) return false;
  }
  return true;
}

namespace {

FormulaPtr mu_closure(const Definition& d, const SortPtr& sort) {
  FormulaPtr body = d.body;
  auto ps = d.flat_params();
  for (auto& g : d.params)
    if (g.is_tuple && g.members.size() > 1)
      throw HigherOrderTupleEscape(
          "cannot build a mu-formula from tuple parameters; flatten first");
  SortPtr rest = sort;
  std::vector<SortPtr> argS;
  for (size_t i = 0; i < ps.size(); ++i) {
    argS.push_back(rest->arg);
    rest = rest->res;
  }
  for (size_t i = ps.size(); i-- > 0;)
    body = mk_abs(ps[i].name, argS[i], body);
  return mk_mu(d.name, sort, body);
}

}  // namespace

FormulaPtr to_mu_formula(const EquationSystem& es) {
  // Sequential elimination: close each definition in turn and substitute it
  // into the remaining bodies and main.
  std::vector<FormulaPtr> bodies;
  for (auto& d : es.defs) bodies.push_back(d.body);
  FormulaPtr main = es.main;
  for (size_t i = 0; i < es.defs.size(); ++i) {
    Definition cur = es.defs[i];
    cur.body = bodies[i];
    auto* s = es.env_lookup(cur.name);
    if (!s) throw UnboundVariable("definition " + cur.name + " not in %ENV");
    auto closed = mu_closure(cur, *s);
    Subst sub;
    sub.emplace(cur.name, Binding(closed));
    for (size_t j = i + 1; j < es.defs.size(); ++j)
      bodies[j] = substitute(bodies[j], sub);
    main = substitute(main, sub);
  }
  return main;
}

FormulaPtr toform(const EquationSystem& es) {
  if (!recursion_free(es))
    throw NotRecursionFree("equation system has a cyclic dependency");
  return to_mu_formula(es);
}

namespace {

std::string stage_name(const std::string& base, int i) {
  return base + "@" + std::to_string(i);
}

FormulaPtr retarget(const FormulaPtr& f, const EquationSystem& es, int i) {
  Subst s;
  for (auto& [n, srt] : es.env) {
    (void)srt;
    s.emplace(n, Binding(mk_var(stage_name(n, i))));
  }
  return substitute(f, s);
}

}  // namespace

EquationSystem m_approximation(const EquationSystem& es, int m) {
  if (m < 0) throw Error("negative approximation stage");
  EquationSystem out;
  out.maxar = es.maxar;
  for (int i = 0; i <= m; ++i)
    for (auto& [n, s] : es.env) out.env.emplace_back(stage_name(n, i), s);
  for (int i = 0; i <= m; ++i) {
    for (auto& d : es.defs) {
      Definition nd;
      nd.name = stage_name(d.name, i);
      nd.params = d.params;
      nd.body = i == 0 ? mk_and(mk_false(), retarget(d.body, es, 0))
                       : retarget(d.body, es, i - 1);
      out.defs.push_back(std::move(nd));
    }
  }
  out.main = retarget(es.main, es, m);
  return out;
}

namespace {

void maxar_sort(const SortPtr& s, int& m) {
  if (s->kind == Sort::Kind::Arrow) {
    if (is_some_int_pred(s->arg)) m = std::max(m, arity(s->arg));
    maxar_sort(s->arg, m);
    maxar_sort(s->res, m);
  } else if (s->kind == Sort::Kind::Product) {
    for (auto& c : s->comps) maxar_sort(c, m);
  }
}

void maxar_rec(const FormulaPtr& f, int& m) {
  if (!f) return;
  if (f->sort) {
    if (is_some_int_pred(f->sort)) m = std::max(m, arity(f->sort));
    maxar_sort(f->sort, m);
  }
  maxar_rec(f->f1, m);
  maxar_rec(f->f2, m);
  for (auto& it : f->items) maxar_rec(it, m);
}

}  // namespace

int compute_maxar(const FormulaPtr& f) {
  int m = 1;
  maxar_rec(f, m);
  return m;
}

bool body_grammar_ok(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Var:
      return true;
    case Formula::Kind::Or:
      return body_grammar_ok(f->f1) && body_grammar_ok(f->f2);
    case Formula::Kind::And:
      return f->f1->kind == Formula::Kind::Le && body_grammar_ok(f->f2);
    case Formula::Kind::App:
      return body_grammar_ok(f->f1) && body_grammar_ok(f->f2);
    case Formula::Kind::AppInt:
      return body_grammar_ok(f->f1);
    default:
      return false;
  }
}

namespace {

void check_uniform_arity(const SortPtr& s, int M) {
  if (s->kind == Sort::Kind::Arrow) {
    if (is_some_int_pred(s->arg) && s->arg->kind == Sort::Kind::Arrow &&
        arity(s->arg) != M)
      throw NotNormalized("int-predicate argument sort " + to_string(s->arg) +
                          " has arity " + std::to_string(arity(s->arg)) +
                          ", expected " + std::to_string(M));
    check_uniform_arity(s->arg, M);
    check_uniform_arity(s->res, M);
  }
}

}  // namespace

void check_normalized(const EquationSystem& es) {
  typecheck_system(es);
  if (!es.maxar) throw NotNormalized("missing %MAXAR");
  int M = *es.maxar;
  for (auto& [n, s] : es.env) {
    (void)n;
    check_uniform_arity(s, M);
  }
  for (auto& d : es.defs) {
    for (auto& g : d.params)
      if (g.is_tuple && g.members.size() > 1)
        throw NotNormalized("tuple parameter in normalized system");
    if (!body_grammar_ok(d.body))
      throw NotNormalized("body of " + d.name +
                          " violates the disjunctive body grammar");
  }
  // main must be S (\z1 .. \zM . true)
  const Formula* m = es.main.get();
  if (m->kind != Formula::Kind::App || m->f1->kind != Formula::Kind::Var)
    throw NotNormalized("main must have the shape S (\\z1 .. zM . true)");
  const SortPtr* ss = es.env_lookup(m->f1->name);
  if (!ss || !sort_eq(*ss, arrow(int_arrows(M, prop_sort()), prop_sort())))
    throw NotNormalized("main head must be defined with sort (int^M -> prop) -> prop");
  FormulaPtr arg = m->f2;
  for (int i = 0; i < M; ++i) {
    if (arg->kind != Formula::Kind::Abs ||
        arg->sort->kind != Sort::Kind::Int)
      throw NotNormalized("main argument must bind M integer variables");
    arg = arg->f1;
  }
  if (!is_literal_true(arg))
    throw NotNormalized("main argument body must be true");
}

std::string print_system(const EquationSystem& es) {
  std::ostringstream out;
  out << "%ENV\n";
  for (auto& [n, s] : es.env) out << n << " : " << to_string(s) << ";\n";
  out << "%DEFS\n";
  for (auto& d : es.defs) {
    out << d.name;
    for (auto& g : d.params) {
      out << " ";
      if (g.is_tuple && g.members.size() > 1) {
        out << "<";
        for (size_t i = 0; i < g.members.size(); ++i) {
          if (i) out << ", ";
          out << g.members[i].name;
        }
        out << ">";
      } else {
        out << g.members[0].name;
      }
    }
    out << " =mu " << to_string(d.body) << ";\n";
  }
  out << "%MAIN " << to_string(es.main) << ";\n";
  if (es.maxar) out << "%MAXAR " << *es.maxar << ";\n";
  return out.str();
}

size_t system_node_count(const EquationSystem& es) {
  size_t n = node_count(es.main);
  for (auto& d : es.defs) n += node_count(d.body);
  return n;
}

}  // namespace muhfl

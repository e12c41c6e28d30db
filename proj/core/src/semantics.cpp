#include "muhfl/semantics.hpp"

#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "muhfl/ops.hpp"
#include "muhfl/printer.hpp"

namespace muhfl {

std::string Verdict::serialize() const {
  switch (kind) {
    case Kind::Valid:
      return "VALID steps=" + std::to_string(steps);
    case Kind::Invalid:
      return std::string("INVALID exhaustive=") +
             (exhaustive ? "true" : "false");
    case Kind::Unknown:
      return std::string("UNKNOWN reason=") +
             (reason == Reason::FuelExhausted ? "FuelExhausted"
                                              : "BoundTruncated");
  }
  return "?";
}

namespace {

FormulaPtr unfold(const FormulaPtr& mu) {
  Subst s;
  s.emplace(mu->name, Binding(mu));
  return substitute(mu->f1, s);
}

// Successors of f viewed as the hole of the evaluation context.  Sets
// *exists_expanded when an exists is instantiated over the finite box.
std::vector<FormulaPtr> step_rec(const FormulaPtr& f, int box,
                                 bool* exists_expanded) {
  switch (f->kind) {
    case Formula::Kind::Or:
      return {f->f1, f->f2};
    case Formula::Kind::And: {
      if (is_literal_true(f->f1)) return {f->f2};
      if (is_literal_false(f->f1)) return {mk_false()};
      auto inner = step_rec(f->f1, box, exists_expanded);
      std::vector<FormulaPtr> out;
      out.reserve(inner.size());
      for (auto& s : inner) out.push_back(mk_and(s, f->f2));
      return out;
    }
    case Formula::Kind::App: {
      if (f->f1->kind == Formula::Kind::Abs) {
        Subst s;
        s.emplace(f->f1->name, Binding(f->f2));
        return {substitute(f->f1->f1, s)};
      }
      auto inner = step_rec(f->f1, box, exists_expanded);
      std::vector<FormulaPtr> out;
      for (auto& s : inner) out.push_back(mk_app(s, f->f2));
      return out;
    }
    case Formula::Kind::AppInt: {
      if (f->f1->kind == Formula::Kind::Abs) {
        Subst s;
        s.emplace(f->f1->name, Binding(f->e1));
        return {substitute(f->f1->f1, s)};
      }
      auto inner = step_rec(f->f1, box, exists_expanded);
      std::vector<FormulaPtr> out;
      for (auto& s : inner) out.push_back(mk_app_int(s, f->e1));
      return out;
    }
    case Formula::Kind::Mu:
      return {unfold(f)};
    case Formula::Kind::Le: {
      if (is_literal_true(f) || is_literal_false(f)) return {};
      return {eval_int(f->e1) <= eval_int(f->e2) ? mk_true() : mk_false()};
    }
    case Formula::Kind::Exists: {
      if (exists_expanded) *exists_expanded = true;
      std::vector<FormulaPtr> out;
      out.reserve(2 * box + 1);
      for (int n = -box; n <= box; ++n) {
        Subst s;
        s.emplace(f->name, Binding(ilit(n)));
        out.push_back(substitute(f->f1, s));
      }
      return out;
    }
    default:
      return {};
  }
}

}  // namespace

std::vector<FormulaPtr> step(const FormulaPtr& f, int exists_box) {
  return step_rec(f, exists_box, nullptr);
}

Verdict search_valid(const FormulaPtr& f, const SearchBudget& budget) {
  Verdict v;
  if (is_literal_true(f)) {
    v.kind = Verdict::Kind::Valid;
    v.steps = 0;
    return v;
  }
  std::deque<FormulaPtr> frontier{f};
  std::unordered_set<std::string> memo{canonical_key(f)};
  size_t expanded = 0;
  long depth = 0;
  bool exists_seen = false;
  bool fuel_out = false, states_out = false, size_out = false;
  while (!frontier.empty() && !fuel_out && !states_out) {
    ++depth;
    size_t level = frontier.size();
    for (size_t i = 0; i < level; ++i) {
      auto cur = frontier.front();
      frontier.pop_front();
      if (expanded++ >= budget.max_steps) {
        fuel_out = true;
        break;
      }
      for (auto& s : step_rec(cur, budget.exists_box, &exists_seen)) {
        if (is_literal_true(s)) {
          v.kind = Verdict::Kind::Valid;
          v.steps = depth;
          return v;
        }
        if (is_literal_false(s)) continue;
        if (node_count(s) > budget.max_nodes) {
          // Divergent unfoldings can grow states without bound; pruning
          // them keeps every search terminating, at the price of an
          // inconclusive verdict instead of an exhaustive one.
          size_out = true;
          continue;
        }
        auto key = canonical_key(s);
        if (!memo.insert(std::move(key)).second) continue;
        if (memo.size() > budget.max_states) {
          states_out = true;
          break;
        }
        frontier.push_back(s);
      }
      if (states_out) break;
    }
  }
  if (fuel_out || states_out || size_out) {
    v.kind = Verdict::Kind::Unknown;
    v.reason = fuel_out ? Verdict::Reason::FuelExhausted
                        : Verdict::Reason::BoundTruncated;
    return v;
  }
  v.kind = Verdict::Kind::Invalid;
  v.exhaustive = !exists_seen;
  return v;
}

FormulaPtr encode_exists(const FormulaPtr& f) {
  if (!f) return f;
  auto g = std::make_shared<Formula>(f->kind);
  *g = *f;
  g->f1 = encode_exists(f->f1);
  g->f2 = encode_exists(f->f2);
  g->items.clear();
  for (auto& it : f->items) g->items.push_back(encode_exists(it));
  if (f->kind != Formula::Kind::Exists) return g;
  // g->f1 is the recursively encoded body.
  std::string x = NameSupply::fresh("ex");
  std::string y = NameSupply::fresh("y");
  Subst pos, neg;
  pos.emplace(f->name, Binding(ivar(y)));
  neg.emplace(f->name, Binding(imul(ilit(-1), ivar(y))));
  auto body = mk_or(mk_or(substitute(g->f1, pos), substitute(g->f1, neg)),
                    mk_app_int(mk_var(x), iadd(ivar(y), ilit(1))));
  auto mu = mk_mu(x, arrow(int_sort(), prop_sort()),
                  mk_abs(y, int_sort(), body));
  return mk_app_int(mu, ilit(0));
}

namespace {

using Key = std::pair<std::string, std::vector<long long>>;

struct KeyHash {
  size_t operator()(const Key& k) const {
    size_t h = std::hash<std::string>()(k.first);
    for (auto v : k.second)
      h = h * 1000003u + std::hash<long long>()(v);
    return h;
  }
};

// Demand-driven least-fixpoint computation over the finite box: entries are
// discovered lazily from main, start at bottom, and dependents are
// re-evaluated when an entry flips to top.  The limit coincides with naive
// Kleene iteration restricted to the entries reachable from main.
struct KleeneSolver {
  const EquationSystem& es;
  int box;
  size_t max_iters;

  std::unordered_map<Key, bool, KeyHash> value;
  std::unordered_map<Key, std::unordered_set<Key, KeyHash>, KeyHash> dependents;
  std::deque<Key> worklist;
  std::unordered_set<Key, KeyHash> queued;
  size_t evals = 0;
  bool fuel_out = false;

  // Full lambda-closures of the definitions.
  std::unordered_map<std::string, FormulaPtr> closures;

  explicit KleeneSolver(const EquationSystem& s, int b, size_t mi)
      : es(s), box(b), max_iters(mi) {
    for (auto& d : es.defs) {
      auto* srt = es.env_lookup(d.name);
      FormulaPtr body = d.body;
      auto ps = d.flat_params();
      SortPtr rest = *srt;
      std::vector<SortPtr> argS;
      for (size_t i = 0; i < ps.size(); ++i) {
        if (rest->kind != Sort::Kind::Arrow)
          throw ArityMismatch("parameter/sort mismatch in " + d.name);
        argS.push_back(rest->arg);
        rest = rest->res;
      }
      for (size_t i = ps.size(); i-- > 0;)
        body = mk_abs(ps[i].name, argS[i], body);
      closures[d.name] = body;
    }
  }

  bool in_box(const Int& v) const { return v >= -box && v <= box; }

  bool lookup(const Key& k, const Key& from) {
    dependents[k].insert(from);
    if (!value.count(k)) {
      value[k] = false;
      enqueue(k);
    }
    return value[k];
  }

  void enqueue(const Key& k) {
    if (queued.insert(k).second) worklist.push_back(k);
  }

  // Evaluate an application spine head applied to integer arguments.
  bool apply(const FormulaPtr& g, std::vector<Int> args,
             std::map<std::string, Int>& env, const Key& self) {
    switch (g->kind) {
      case Formula::Kind::AppInt: {
        args.insert(args.begin(), eval_int(g->e1, env));
        return apply(g->f1, std::move(args), env, self);
      }
      case Formula::Kind::Abs: {
        if (args.empty()) throw ArityMismatch("under-applied lambda");
        auto saved = env.find(g->name);
        std::optional<Int> old;
        if (saved != env.end()) old = saved->second;
        env[g->name] = args.front();
        args.erase(args.begin());
        bool r = args.empty() ? eval(g->f1, env, self)
                              : apply(g->f1, std::move(args), env, self);
        if (old) env[g->name] = *old; else env.erase(g->name);
        return r;
      }
      case Formula::Kind::Var: {
        if (!es.env_lookup(g->name))
          throw OrderTooHigh("predicate variable " + g->name +
                             " in an order-0 evaluation");
        std::vector<long long> key;
        for (auto& a : args) {
          if (!in_box(a)) return false;  // bottom outside the box
          key.push_back(static_cast<long long>(a));
        }
        return lookup({g->name, std::move(key)}, self);
      }
      default:
        throw GrammarViolation("unsupported application head in order-0 body");
    }
  }

  bool eval(const FormulaPtr& f, std::map<std::string, Int>& env,
            const Key& self) {
    switch (f->kind) {
      case Formula::Kind::Le:
        return eval_int(f->e1, env) <= eval_int(f->e2, env);
      case Formula::Kind::And:
        return eval(f->f1, env, self) && eval(f->f2, env, self);
      case Formula::Kind::Or:
        return eval(f->f1, env, self) || eval(f->f2, env, self);
      case Formula::Kind::Exists: {
        auto saved = env.find(f->name);
        std::optional<Int> old;
        if (saved != env.end()) old = saved->second;
        bool r = false;
        for (int n = -box; n <= box && !r; ++n) {
          env[f->name] = n;
          r = eval(f->f1, env, self);
        }
        if (old) env[f->name] = *old; else env.erase(f->name);
        return r;
      }
      case Formula::Kind::Var:
      case Formula::Kind::AppInt:
      case Formula::Kind::App:
        if (f->kind == Formula::Kind::App)
          throw OrderTooHigh("higher-order application in order-0 evaluation");
        return apply(f, {}, env, self);
      case Formula::Kind::Abs:
        throw ArityMismatch("unapplied lambda in order-0 body");
      case Formula::Kind::Mu:
        throw GrammarViolation("mu inside an order-0 definition body");
      default:
        throw GrammarViolation("unsupported formula in order-0 evaluation");
    }
  }

  bool eval_entry(const Key& k) {
    ++evals;
    std::map<std::string, Int> env;
    if (k.first.empty()) return eval(es.main, env, k);
    std::vector<Int> args(k.second.begin(), k.second.end());
    auto& cl = closures.at(k.first);
    if (args.empty()) return eval(cl, env, k);
    return apply(cl, std::move(args), env, k);
  }

  Verdict solve() {
    Key mainKey{"", {}};
    value[mainKey] = false;
    enqueue(mainKey);
    while (!worklist.empty()) {
      if (evals >= max_iters * std::max<size_t>(1, value.size())) {
        fuel_out = true;
        break;
      }
      Key k = worklist.front();
      worklist.pop_front();
      queued.erase(k);
      bool v = eval_entry(k);
      if (v && !value[k]) {
        value[k] = true;
        if (k == mainKey) break;
        for (auto& d : dependents[k]) enqueue(d);
      }
    }
    Verdict out;
    if (value[mainKey]) {
      out.kind = Verdict::Kind::Valid;
      out.steps = static_cast<long>(evals);
    } else {
      out.kind = Verdict::Kind::Unknown;
      out.reason = fuel_out ? Verdict::Reason::FuelExhausted
                            : Verdict::Reason::BoundTruncated;
    }
    return out;
  }
};

}  // namespace

Verdict kleene_eval(const EquationSystem& es, int box, size_t max_iters) {
  typecheck_system(es);
  for (auto& [n, s] : es.env)
    if (order(s) > 0)
      throw OrderTooHigh("definition " + n + " has order " +
                         std::to_string(order(s)) +
                         "; kleene_eval requires order 0");
  KleeneSolver solver(es, box, max_iters);
  return solver.solve();
}

}  // namespace muhfl

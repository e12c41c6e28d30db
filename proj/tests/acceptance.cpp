// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Tolerances and budgets are pinned in the code below.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "muhfl/fromdisj.hpp"
#include "muhfl/ops.hpp"
#include "muhfl/parser.hpp"
#include "muhfl/printer.hpp"
#include "muhfl/semantics.hpp"
#include "muhfl/todisj.hpp"
#include "muhfl/typecheck.hpp"
#include "testutil.hpp"

using namespace muhfl;
using muhfl::testing::Rng;

namespace {

class Timed {
 public:
  Timed(const char* label, double limit_s) : label_(label), limit_s_(limit_s) {}
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }
  void finish(bool ok) const {
    double s = seconds();
    std::printf("[%s] %s (%.2fs, limit %.0fs)\n", label_, ok && s < limit_s_ ? "PASS" : "FAIL",
                s, limit_s_);
    std::fflush(stdout);
    CHECK(ok);
    CHECK(s < limit_s_);
  }

 private:
  using clock = std::chrono::steady_clock;
  const char* label_;
  double limit_s_;
  clock::time_point start_ = clock::now();
};

// Size-law corpus shared between AC5/AC6 and AC9.
struct SizeSample {
  size_t nodes_in, nodes_out;
  int k_max;
};
std::vector<SizeSample>& size_samples() {
  static std::vector<SizeSample> s;
  return s;
}

void record_stats(const LowerStats& st, int k_max) {
  size_samples().push_back({st.nodes_in, st.nodes_out, k_max});
}

int max_gar(const EquationSystem& es) {
  int k = 0;
  for (const auto& [n, s] : es.env) k = std::max(k, gar(s));
  return k;
}

}  // namespace

TEST_CASE("AC1") {
  Timed t("AC1", 10.0);
  bool ok = true;
  for (long n = -3; n <= 3; ++n) {
    bool expect = n < 0;
    FormulaPtr f = testing::phi_sum(n);
    ok = ok && (search_valid(f).valid() == expect);
    ok = ok && (search_valid(raise_top(f)).valid() == expect);
    EquationSystem low = lower_system(normalize(f));
    ok = ok && (kleene_eval(low, 16).valid() == expect);
  }
  t.finish(ok);
}

TEST_CASE("AC2") {
  Timed t("AC2", 1.0);
  EquationSystem low = lower_system(testing::d_sum_system(3));
  std::map<std::string, int> ms;
  for (const auto& d : low.defs) ms[d.name.substr(0, d.name.rfind('$'))]++;
  bool ok = ms == std::map<std::string, int>{{"S", 2}, {"C", 2}, {"Sum", 3}, {"K", 2}} &&
            low.defs.size() == 9 && order_of_formula(to_mu_formula(low)) == 0;
  t.finish(ok);
}

TEST_CASE("AC3") {
  Timed t("AC3", 5.0);
  EquationSystem es = testing::fgh_system();
  bool ok = search_valid(to_mu_formula(es)).valid();
  EquationSystem low = lower_system(es);
  ok = ok && search_valid(to_mu_formula(low)).valid();
  std::set<long> hits;
  for (long n = -8; n <= 8; ++n) {
    EquationSystem probe = low;
    probe.main = [&] {
      Subst s;
      s[low.main->name] = Binding(ilit(n));
      return substitute(low.main->f1, s);
    }();
    if (search_valid(to_mu_formula(probe)).valid()) hits.insert(n);
  }
  ok = ok && hits == std::set<long>{1, 2};
  t.finish(ok);
}

TEST_CASE("AC4") {
  Timed t("AC4", 1.0);
  EquationSystem low = lower_system(testing::sum_plus_system(3));
  bool ok = order_of_system(low) == 1;
  const SortPtr* s = low.env_lookup("Sum$0");
  ok = ok && s != nullptr &&
       to_string(*s) ==
           "(int -> int -> prop) -> (int -> int -> prop) -> (int -> int -> prop)"
           " -> int -> int -> prop";
  t.finish(ok);
}

TEST_CASE("AC5") {
  Timed t("AC5", 120.0);
  Rng rng(510510);
  int decisive = 0, total = 500;
  bool ok = true;
  for (int i = 0; i < total; ++i) {
    FormulaPtr f = testing::gen_formula(rng, 40);
    FormulaPtr r = raise_top(f);
    // typing preservation
    ok = ok && sort_eq(typecheck(r), prop_sort());
    // order shift: +1 when a fixpoint occurs, unchanged at order 0 otherwise
    int shift = order_of_formula(f) > 0 || order_of_formula(r) > 0 ? 1 : 0;
    ok = ok && order_of_formula(r) == order_of_formula(f) + shift;
    ok = ok && is_disjunctive(r);
    Verdict src = search_valid(f);
    if (src.kind == Verdict::Kind::Unknown) continue;
    ++decisive;
    Verdict out = search_valid(r);
    ok = ok && out.kind != Verdict::Kind::Unknown && src.valid() == out.valid();

    EquationSystem norm = normalize(r);
    LowerStats st;
    (void)lower_system(norm, {}, &st);
    record_stats(st, max_gar(norm));
  }
  ok = ok && decisive * 100 >= total * 95;
  std::printf("[AC5] decisive %d/%d\n", decisive, total);
  t.finish(ok);
}

TEST_CASE("AC6") {
  Timed t("AC6", 180.0);
  Rng rng(606060);
  bool ok = true;
  for (int i = 0; i < 200; ++i) {
    EquationSystem es = testing::gen_system(rng);
    LowerStats st;
    EquationSystem low = lower_system(es, {}, &st);
    // output typing
    try {
      typecheck_system(low);
    } catch (const Error&) {
      ok = false;
    }
    // def-count law k+1 with k = 1 predicate parameter per definition
    ok = ok && low.defs.size() == 2 * es.defs.size();
    // order drop max(0, n-1)
    ok = ok && order_of_system(low) == 0;
    // the marked component stays out of the reduced definitions
    for (const auto& d : low.defs) {
      if (d.name.size() >= 2 && d.name.substr(d.name.size() - 2) == "$0") continue;
      for (const auto& v : free_vars(d.body))
        ok = ok && !(v.size() >= 2 && v.substr(v.size() - 2) == "$m");
    }
    // verdict agreement
    Verdict src = search_valid(to_mu_formula(es));
    Verdict out = kleene_eval(low, 32);
    if (src.valid()) ok = ok && out.valid();
    if (out.valid()) ok = ok && src.valid();
    record_stats(st, max_gar(es));
  }
  t.finish(ok);
}

TEST_CASE("AC7") {
  Timed t("AC7", 60.0);
  bool ok = true;
  auto check_monotone = [&](const EquationSystem& es) {
    bool seen_valid = false;
    for (int m = 0; m <= 4; ++m) {
      bool v = search_valid(toform(m_approximation(es, m))).valid();
      if (seen_valid && !v) ok = false;  // must be nondecreasing
      seen_valid = seen_valid || v;
    }
    if (seen_valid) ok = ok && search_valid(to_mu_formula(es)).valid();
  };
  check_monotone(testing::d_sum_system(-1));
  Rng rng(777);
  for (int i = 0; i < 5; ++i) check_monotone(testing::gen_system(rng, /*recursive=*/true));
  t.finish(ok);
}

TEST_CASE("AC8") {
  Timed t("AC8", 30.0);
  Rng rng(808080);
  bool ok = true;
  int done = 0;
  while (done < 100) {
    EquationSystem es = testing::gen_system(rng);
    for (const auto& def : es.defs) {
      auto params = def.flat_params();
      if (params.size() < 2) continue;
      LowerCtx ctx;
      ctx.es = &es;
      ctx.M = es.maxar.value_or(1);
      ctx.predvars = {params[0].name};
      ctx.gamma = {{params[1].name, params[1].sort}};
      Subst s;
      s[params[1].name] = Binding(ilit(testing::pick(rng, -3, 3)));
      auto a = lower_formula(def.body, ctx);
      auto b = lower_formula(substitute(def.body, s), ctx);
      if (a.size() != b.size()) {
        ok = false;
        break;
      }
      for (size_t j = 0; j < a.size(); ++j)
        ok = ok && alpha_eq(substitute(a[j], s), b[j]);
      if (++done >= 100) break;
    }
  }
  t.finish(ok);
}

TEST_CASE("AC9") {
  Timed t("AC9", 10.0);
  // Pinned after a calibration run over the AC5/AC6 corpus, whose worst
  // observed ratio nodes_out / ((k_max + 2) * nodes_in) was 1.032.
  const double C = 2.0;
  bool ok = !size_samples().empty();
  double worst = 0.0;
  for (const auto& s : size_samples()) {
    double ratio = static_cast<double>(s.nodes_out) /
                   (static_cast<double>(s.k_max + 2) * static_cast<double>(s.nodes_in));
    worst = std::max(worst, ratio);
    ok = ok && ratio <= C;
  }
  std::printf("[AC9] worst ratio %.3f (C = %.1f)\n", worst, C);
  t.finish(ok);
}

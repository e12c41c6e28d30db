#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "muhfl/ops.hpp"
#include "muhfl/parser.hpp"
#include "muhfl/printer.hpp"
#include "muhfl/semantics.hpp"
#include "muhfl/todisj.hpp"
#include "muhfl/typecheck.hpp"
#include "testutil.hpp"

using namespace muhfl;
using muhfl::testing::Rng;

TEST_CASE("sort raising") {
  CHECK(to_string(raise_sort(prop_sort())) == "prop -> prop");
  CHECK(to_string(raise_sort(int_sort())) == "int");
  CHECK(to_string(raise_sort(parse_sort("int -> prop"))) == "int -> prop -> prop");
  CHECK(to_string(raise_sort(parse_sort("(int -> prop) -> prop"))) ==
        "(int -> prop -> prop) -> prop -> prop");
}

TEST_CASE("raising a comparison produces a guard abstraction") {
  FormulaPtr f = parse_formula("3 <= 4");
  FormulaPtr raw = raise_body(f);
  TypeEnv env;
  CHECK(alpha_eq(raw, parse_formula("\\c : prop . 3 <= 4 /\\ c", env)));
  CHECK(alpha_eq(raise_top(f), parse_formula("3 <= 4 /\\ 0 <= 0")));
}

TEST_CASE("raising pushes conjunction into continuations") {
  FormulaPtr f = parse_formula("1 <= 2 /\\ 3 <= 4");
  // (phi1 /\ phi2)# = \c . phi1#(phi2# c): guards nest left-to-right
  CHECK(alpha_eq(raise_top(f), parse_formula("1 <= 2 /\\ (3 <= 4 /\\ 0 <= 0)")));
  FormulaPtr g = parse_formula("1 <= 2 \\/ 3 <= 4");
  CHECK(alpha_eq(raise_top(g),
                 parse_formula("(1 <= 2 /\\ 0 <= 0) \\/ (3 <= 4 /\\ 0 <= 0)")));
}

TEST_CASE("raised formulas are disjunctive and prop-sorted") {
  Rng rng(20240818);
  for (int i = 0; i < 100; ++i) {
    FormulaPtr f = testing::gen_formula(rng);
    FormulaPtr r = raise_top(f);
    CHECK(sort_eq(typecheck(r), prop_sort()));
    CHECK(is_disjunctive(r));
    CHECK(free_vars(r).empty());
  }
}

TEST_CASE("raising shifts the order by one exactly when a fixpoint occurs") {
  FormulaPtr flat = parse_formula("1 <= 2 \\/ (exists z . z <= 0)");
  CHECK(order_of_formula(raise_top(flat)) == 0);
  FormulaPtr rec = testing::phi_sum(1);
  CHECK(order_of_formula(rec) == 1);
  CHECK(order_of_formula(raise_top(rec)) == 2);
}

TEST_CASE("raising preserves verdicts on the summation example") {
  for (long n = -2; n <= 2; ++n) {
    Verdict src = search_valid(testing::phi_sum(n));
    Verdict out = search_valid(raise_top(testing::phi_sum(n)));
    CHECK(src.valid() == out.valid());
  }
}

TEST_CASE("raising requires desugared input") {
  TypeEnv env;
  FormulaPtr sugar = mk_cmp(Formula::Kind::LtS, ilit(0), ilit(1));
  CHECK_THROWS_AS((void)raise_body(sugar), Error);
  CHECK_NOTHROW((void)raise_top(desugar(sugar)));
}

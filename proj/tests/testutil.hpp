#pragma once

// Shared builders and random generators for the test suites.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "muhfl/eqsys.hpp"
#include "muhfl/parser.hpp"
#include "muhfl/printer.hpp"

namespace muhfl::testing {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// ---- worked examples -------------------------------------------------

// Recursive summation applied at n with continuation (\r . r < n).
inline FormulaPtr phi_sum(long n) {
  std::ostringstream os;
  os << "(mu Sum : int -> (int -> prop) -> prop ."
     << " \\x : int . \\k : int -> prop ."
     << " x < 0 \\/ (x = 0 /\\ k 0)"
     << " \\/ (x > 0 /\\ Sum (x - 1) (\\y : int . k (x + y))))"
     << " (" << n << ") (\\r : int . r < (" << n << "))";
  return parse_formula(os.str());
}

// The normalized summation system with the bound fixed to n.
inline EquationSystem d_sum_system(long n) {
  std::ostringstream os;
  os << "%ENV\n"
     << "S : (int -> prop) -> prop;\n"
     << "C : (int -> prop) -> int -> prop;\n"
     << "Sum : (int -> prop) -> int -> (int -> prop) -> prop;\n"
     << "K : (int -> prop) -> int -> int -> prop;\n"
     << "%DEFS\n"
     << "S t =mu Sum t (" << n << ") (C t);\n"
     << "C t r =mu r < (" << n << ") /\\ t 0;\n"
     << "Sum t x k =mu (x < 0 /\\ t 0) \\/ (x = 0 /\\ k 0)"
     << " \\/ (x > 0 /\\ Sum t (x - 1) (K k x));\n"
     << "K k x y =mu k (x + y);\n"
     << "%MAIN S (\\z : int . true);\n"
     << "%MAXAR 1;\n";
  return parse_system(os.str());
}

inline EquationSystem fgh_system() {
  return parse_system(
      "%ENV\n"
      "S : (int -> prop) -> prop;\n"
      "F : ((int -> prop) -> prop) -> (int -> prop) -> prop;\n"
      "G : (int -> prop) -> (int -> prop) -> prop;\n"
      "H : int -> prop;\n"
      "%DEFS\n"
      "S t =mu F (G t) t;\n"
      "F v w =mu v H \\/ w 2;\n"
      "G p q =mu p 1;\n"
      "H x =mu H x;\n"
      "%MAIN S (\\z : int . true);\n"
      "%MAXAR 1;\n");
}

// The order-2 summation over an abstract addition operator.
inline EquationSystem sum_plus_system(long n) {
  std::ostringstream os;
  os << "%ENV\n"
     << "S : (int -> prop) -> prop;\n"
     << "C : (int -> prop) -> int -> prop;\n"
     << "Sum : (int -> (int -> prop) -> prop) -> int -> (int -> prop) -> prop;\n"
     << "plus : int -> (int -> prop) -> prop;\n"
     << "D : (int -> (int -> prop) -> prop) -> int -> (int -> prop) -> int -> prop;\n"
     << "E : int -> (int -> prop) -> int -> prop;\n"
     << "%DEFS\n"
     << "S t =mu Sum plus (" << n << ") (C t);\n"
     << "C t x =mu x < (" << n << ") /\\ t 0;\n"
     << "Sum f x k =mu (x <= 0 /\\ k 0) \\/ (x > 0 /\\ f x (D f x k));\n"
     << "plus x k =mu k (x + x);\n"
     << "D f x k y =mu Sum f (x - 1) (E y k);\n"
     << "E y k z =mu k (y + z);\n"
     << "%MAIN S (\\z : int . true);\n"
     << "%MAXAR 1;\n";
  return parse_system(os.str());
}

// (mu p . \y . y = 0 \/ (p (y - 1) /\ p (y + 1))) n — valid iff n = 0.
inline FormulaPtr mu_p(long n) {
  std::ostringstream os;
  os << "(mu p : int -> prop . \\y : int ."
     << " y = 0 \\/ (p (y - 1) /\\ p (y + 1))) (" << n << ")";
  return parse_formula(os.str());
}

// ---- random closed formulas of order <= 1 ----------------------------
//
// Recursive predicates always count an argument down to a base case, so
// validity search is almost always decisive under default budgets.

struct FormulaGen {
  Rng& rng;
  std::vector<std::string> int_vars;
  std::vector<std::string> pred_vars;  // of sort int -> prop
  int mu_budget = 2;

  explicit FormulaGen(Rng& r) : rng(r) {}

  std::string int_expr(int depth = 0) {
    std::ostringstream os;
    if (!int_vars.empty() && chance(rng, 0.6)) {
      os << int_vars[pick(rng, 0, static_cast<int>(int_vars.size()) - 1)];
      if (depth < 1 && chance(rng, 0.5)) os << " + (" << pick(rng, -3, 3) << ")";
    } else {
      os << "(" << pick(rng, -4, 4) << ")";
    }
    return os.str();
  }

  std::string atom() {
    int r = pick(rng, 0, 3);
    // Predicate calls take literal arguments so the reachable state space of
    // every generated formula is finite; a variable argument could re-enter a
    // recursive predicate with an ever-changing value.
    if (r == 0 && !pred_vars.empty())
      return pred_vars[pick(rng, 0, static_cast<int>(pred_vars.size()) - 1)] + " (" +
             std::to_string(pick(rng, -4, 4)) + ")";
    static const char* ops[] = {"<=", "<", "=", ">", ">="};
    return "(" + int_expr() + " " + ops[pick(rng, 0, 4)] + " " + int_expr() + ")";
  }

  std::string prop(int depth) {
    if (depth <= 0) return atom();
    switch (pick(rng, 0, 5)) {
      case 0:
        return "(" + prop(depth - 1) + " \\/ " + prop(depth - 1) + ")";
      case 1:
        return "(" + prop(depth - 1) + " /\\ " + prop(depth - 1) + ")";
      case 2: {
        std::string z = "q" + std::to_string(pick(rng, 0, 999));
        int_vars.push_back(z);
        std::string body = prop(depth - 1);
        int_vars.pop_back();
        // A bounded guard keeps the existential decisive either way.
        return "(exists " + z + " . (0 <= " + z + " /\\ (" + z + " <= 2 /\\ " + body + ")))";
      }
      case 3:
        if (mu_budget > 0) {
          --mu_budget;
          std::string p = "P" + std::to_string(pick(rng, 0, 999));
          std::string x = "v" + std::to_string(pick(rng, 0, 999));
          pred_vars.push_back(p);
          int_vars.push_back(x);
          std::string base = prop(depth - 1);
          pred_vars.pop_back();
          int_vars.pop_back();
          std::ostringstream os;
          os << "((mu " << p << " : int -> prop . \\" << x << " : int . ("
             << x << " <= 0 /\\ " << base << ") \\/ (1 <= " << x << " /\\ " << p << " ("
             << x << " - 1))) (" << pick(rng, 0, 3) << "))";
          return os.str();
        }
        [[fallthrough]];
      default:
        return atom();
    }
  }
};

inline FormulaPtr gen_formula(Rng& rng, size_t max_nodes = 40) {
  for (;;) {
    FormulaGen g(rng);
    FormulaPtr f = parse_formula(g.prop(pick(rng, 1, 3)));
    if (node_count(f) <= max_nodes) return f;
  }
}

// ---- random normalized disjunctive order-1 systems --------------------
//
// Definitions F1 .. FN each take one predicate parameter t : int^M -> prop
// and optionally one integer parameter.  When `recursive` is false, bodies
// only call later definitions, so the system is recursion-free; otherwise a
// definition may also call itself with a decreasing integer argument under
// a positivity guard (still terminating, hence decidable).
inline EquationSystem gen_system(Rng& rng, bool recursive = false) {
  int M = chance(rng, 0.75) ? 1 : 2;
  int N = pick(rng, 2, 4);
  std::vector<bool> has_int(N);
  for (int i = 0; i < N; ++i) has_int[i] = i > 0 && chance(rng, 0.6);
  has_int[0] = false;  // the start symbol takes only the continuation

  auto pred_sort = [&] {
    std::string s = "prop";
    for (int j = 0; j < M; ++j) s = "int -> " + s;
    return "(" + s + ")";
  };
  auto def_name = [](int i) { return "R" + std::to_string(i + 1); };

  std::ostringstream env, defs;
  env << "%ENV\n";
  defs << "%DEFS\n";
  for (int i = 0; i < N; ++i) {
    env << def_name(i) << " : " << pred_sort() << (has_int[i] ? " -> int" : "")
        << " -> prop;\n";
  }

  for (int i = 0; i < N; ++i) {
    auto int_expr = [&] {
      std::ostringstream os;
      if (has_int[i] && chance(rng, 0.7))
        os << "(x + (" << pick(rng, -2, 2) << "))";
      else
        os << "(" << pick(rng, -2, 3) << ")";
      return os.str();
    };
    auto atom = [&]() -> std::string {
      bool callable = i + 1 < N;
      int r = pick(rng, 0, callable ? 2 : 1);
      if (r <= 1) {  // invoke the continuation
        std::string s = "t";
        for (int j = 0; j < M; ++j) s += " " + int_expr();
        return "(" + s + ")";
      }
      int j = pick(rng, i + 1, N - 1);
      std::string s = def_name(j) + " t";
      if (has_int[j]) s += " " + int_expr();
      return "(" + s + ")";
    };
    auto guarded = [&] {
      std::string s = atom();
      int guards = pick(rng, 0, 2);
      for (int g = 0; g < guards; ++g)
        s = "(" + int_expr() + " <= " + int_expr() + " /\\ " + s + ")";
      return s;
    };
    std::string body = guarded();
    int extra = pick(rng, 0, 2);
    for (int d = 0; d < extra; ++d) body = "(" + body + " \\/ " + guarded() + ")";
    if (recursive && has_int[i] && chance(rng, 0.8)) {
      // Self-call on a strictly smaller argument, guarded by positivity.
      body = "(" + body + " \\/ (1 <= x /\\ " + def_name(i) + " t (x - 1)))";
    }
    defs << def_name(i) << " t" << (has_int[i] ? " x" : "") << " =mu " << body << ";\n";
  }

  std::ostringstream os;
  os << env.str() << defs.str() << "%MAIN " << def_name(0) << " (\\";
  for (int j = 0; j < M; ++j) os << "z" << j << (j + 1 < M ? " : int . \\" : "");
  os << " : int . true);\n%MAXAR " << M << ";\n";
  return parse_system(os.str());
}

}  // namespace muhfl::testing

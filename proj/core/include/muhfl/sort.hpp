#pragma once

#include <memory>
#include <string>
#include <vector>

#include "muhfl/base.hpp"

namespace muhfl {

struct Sort;
using SortPtr = std::shared_ptr<const Sort>;

// Simple sorts: int | prop | s -> t | (s1 * ... * sn).
// Products only appear in the intermediate representation produced by the
// order-lowering translation; they never nest directly inside products.
struct Sort {
  enum class Kind { Int, Prop, Arrow, Product };
  Kind kind;
  SortPtr arg, res;             // Arrow
  std::vector<SortPtr> comps;   // Product

  explicit Sort(Kind k) : kind(k) {}
};

SortPtr int_sort();
SortPtr prop_sort();
SortPtr arrow(SortPtr a, SortPtr b);
SortPtr product(std::vector<SortPtr> comps);  // collapses singleton products

bool sort_eq(const SortPtr& a, const SortPtr& b);

// ord(int) = -1, ord(prop) = 0, ord(s->t) = max(ord t, ord s + 1),
// ord(product) = max over components.
int order(const SortPtr& s);

// Number of leading arrow arguments.
int arity(const SortPtr& s);

// int^n -> t
SortPtr int_arrows(int n, SortPtr t);

// Argument sorts and final result of an arrow chain.
std::vector<SortPtr> arg_sorts(const SortPtr& s);
SortPtr result_sort(const SortPtr& s);

// True iff s is int^M -> prop for the given M.
bool is_int_pred(const SortPtr& s, int M);
// True iff s is int^k -> prop for some k >= 0.
bool is_some_int_pred(const SortPtr& s);

std::string to_string(const SortPtr& s);

}  // namespace muhfl

#pragma once

#include <vector>

#include "muhfl/formula.hpp"

namespace muhfl {

// Ordered name -> sort environment with scoped shadowing.
class TypeEnv {
 public:
  TypeEnv() = default;

  void push(const std::string& name, SortPtr s) {
    entries_.emplace_back(name, std::move(s));
  }
  void pop() { entries_.pop_back(); }

  const SortPtr* lookup(const std::string& name) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  const std::vector<std::pair<std::string, SortPtr>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, SortPtr>> entries_;
};

// Infer the sort of f under env.  Comparison sugar operands are ints and the
// node itself is prop.  Tuples get product sorts; an application whose
// argument is a tuple is checked against a product-typed arrow.
SortPtr typecheck(const FormulaPtr& f, TypeEnv& env);
SortPtr typecheck_int(const IntExprPtr& e, TypeEnv& env);  // always int

inline SortPtr typecheck(const FormulaPtr& f) {
  TypeEnv env;
  return typecheck(f, env);
}

// typecheck + closedness + prop.
void check_closed_prop(const FormulaPtr& f);

}  // namespace muhfl

#include "muhfl/sort.hpp"

#include <algorithm>

namespace muhfl {

SortPtr int_sort() {
  static SortPtr s = std::make_shared<Sort>(Sort::Kind::Int);
  return s;
}

SortPtr prop_sort() {
  static SortPtr s = std::make_shared<Sort>(Sort::Kind::Prop);
  return s;
}

SortPtr arrow(SortPtr a, SortPtr b) {
  auto s = std::make_shared<Sort>(Sort::Kind::Arrow);
  s->arg = std::move(a);
  s->res = std::move(b);
  return s;
}

SortPtr product(std::vector<SortPtr> comps) {
  if (comps.size() == 1) return comps[0];
  auto s = std::make_shared<Sort>(Sort::Kind::Product);
  s->comps = std::move(comps);
  return s;
}

bool sort_eq(const SortPtr& a, const SortPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Sort::Kind::Int:
    case Sort::Kind::Prop:
      return true;
    case Sort::Kind::Arrow:
      return sort_eq(a->arg, b->arg) && sort_eq(a->res, b->res);
    case Sort::Kind::Product: {
      if (a->comps.size() != b->comps.size()) return false;
      for (size_t i = 0; i < a->comps.size(); ++i)
        if (!sort_eq(a->comps[i], b->comps[i])) return false;
      return true;
    }
  }
  return false;
}

int order(const SortPtr& s) {
  switch (s->kind) {
    case Sort::Kind::Int:
      return -1;
    case Sort::Kind::Prop:
      return 0;
    case Sort::Kind::Arrow:
      return std::max(order(s->res), order(s->arg) + 1);
    case Sort::Kind::Product: {
      int m = 0;
      for (auto& c : s->comps) m = std::max(m, order(c));
      return m;
    }
  }
  return 0;
}

int arity(const SortPtr& s) {
  int n = 0;
  const Sort* p = s.get();
  while (p->kind == Sort::Kind::Arrow) {
    ++n;
    p = p->res.get();
  }
  return n;
}

SortPtr int_arrows(int n, SortPtr t) {
  for (int i = 0; i < n; ++i) t = arrow(int_sort(), t);
  return t;
}

std::vector<SortPtr> arg_sorts(const SortPtr& s) {
  std::vector<SortPtr> out;
  SortPtr p = s;
  while (p->kind == Sort::Kind::Arrow) {
    out.push_back(p->arg);
    p = p->res;
  }
  return out;
}

SortPtr result_sort(const SortPtr& s) {
  SortPtr p = s;
  while (p->kind == Sort::Kind::Arrow) p = p->res;
  return p;
}

bool is_int_pred(const SortPtr& s, int M) {
  SortPtr p = s;
  for (int i = 0; i < M; ++i) {
    if (p->kind != Sort::Kind::Arrow || p->arg->kind != Sort::Kind::Int)
      return false;
    p = p->res;
  }
  return p->kind == Sort::Kind::Prop;
}

bool is_some_int_pred(const SortPtr& s) {
  SortPtr p = s;
  while (p->kind == Sort::Kind::Arrow && p->arg->kind == Sort::Kind::Int)
    p = p->res;
  return p->kind == Sort::Kind::Prop;
}

std::string to_string(const SortPtr& s) {
  switch (s->kind) {
    case Sort::Kind::Int:
      return "int";
    case Sort::Kind::Prop:
      return "prop";
    case Sort::Kind::Arrow: {
      std::string lhs = to_string(s->arg);
      if (s->arg->kind == Sort::Kind::Arrow) lhs = "(" + lhs + ")";
      return lhs + " -> " + to_string(s->res);
    }
    case Sort::Kind::Product: {
      std::string out = "(";
      for (size_t i = 0; i < s->comps.size(); ++i) {
        if (i) out += " * ";
        std::string c = to_string(s->comps[i]);
        out += c;
      }
      out += ")";
      return out;
    }
  }
  return "?";
}

}  // namespace muhfl

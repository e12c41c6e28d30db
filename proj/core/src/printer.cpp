#include "muhfl/printer.hpp"

namespace muhfl {

namespace {

// Precedence levels shared by formulas and integer expressions:
// 0 binders, 1 \/, 2 /\, 3 comparisons, 4 + -, 5 *, 6 application, 7 atoms.
enum { P_BIND = 0, P_OR = 1, P_AND = 2, P_CMP = 3, P_ADD = 4, P_MUL = 5,
       P_APP = 6, P_ATOM = 7 };

std::string paren(bool need, std::string s) {
  return need ? "(" + std::move(s) + ")" : std::move(s);
}

std::string pint(const IntExprPtr& e, int prec) {
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      // Negative literals in argument position need parens so '-' is never
      // ambiguous with binary subtraction.
      return paren(e->value < 0 && prec > P_ADD, e->value.str());
    case IntExpr::Kind::Var:
      return e->name;
    case IntExpr::Kind::Add: {
      // Print a + (-1)*b and a + (-n) as subtraction; the parser reverses
      // these exactly, so print/parse round trips structurally.
      const auto& r = e->rhs;
      if (r->kind == IntExpr::Kind::Lit && r->value < 0)
        return paren(prec > P_ADD, pint(e->lhs, P_ADD) + " - " +
                                       Int(-r->value).str());
      if (r->kind == IntExpr::Kind::Mul &&
          r->lhs->kind == IntExpr::Kind::Lit && r->lhs->value == -1)
        return paren(prec > P_ADD,
                     pint(e->lhs, P_ADD) + " - " + pint(r->rhs, P_MUL + 1));
      return paren(prec > P_ADD,
                   pint(e->lhs, P_ADD) + " + " + pint(e->rhs, P_ADD + 1));
    }
    case IntExpr::Kind::Mul:
      return paren(prec > P_MUL,
                   pint(e->lhs, P_MUL) + " * " + pint(e->rhs, P_MUL + 1));
  }
  return "?";
}

std::string pform(const FormulaPtr& f, int prec) {
  switch (f->kind) {
    case Formula::Kind::Var:
      return f->name;
    case Formula::Kind::Le:
      if (is_literal_true(f)) return "true";
      if (is_literal_false(f)) return "false";
      return paren(prec > P_CMP,
                   pint(f->e1, P_ADD) + " <= " + pint(f->e2, P_ADD));
    case Formula::Kind::EqS:
      return paren(prec > P_CMP,
                   pint(f->e1, P_ADD) + " = " + pint(f->e2, P_ADD));
    case Formula::Kind::LtS:
      return paren(prec > P_CMP,
                   pint(f->e1, P_ADD) + " < " + pint(f->e2, P_ADD));
    case Formula::Kind::GtS:
      return paren(prec > P_CMP,
                   pint(f->e1, P_ADD) + " > " + pint(f->e2, P_ADD));
    case Formula::Kind::GeS:
      return paren(prec > P_CMP,
                   pint(f->e1, P_ADD) + " >= " + pint(f->e2, P_ADD));
    case Formula::Kind::Or:
      return paren(prec > P_OR,
                   pform(f->f1, P_OR) + " \\/ " + pform(f->f2, P_OR + 1));
    case Formula::Kind::And:
      return paren(prec > P_AND,
                   pform(f->f1, P_AND) + " /\\ " + pform(f->f2, P_AND + 1));
    case Formula::Kind::Mu:
      return paren(prec > P_BIND, "mu " + f->name + " : " +
                                      to_string(f->sort) + " . " +
                                      pform(f->f1, P_BIND));
    case Formula::Kind::Abs:
      return paren(prec > P_BIND, "\\" + f->name + " : " +
                                      to_string(f->sort) + " . " +
                                      pform(f->f1, P_BIND));
    case Formula::Kind::Exists:
      return paren(prec > P_BIND,
                   "exists " + f->name + " . " + pform(f->f1, P_BIND));
    case Formula::Kind::App:
      return paren(prec > P_APP,
                   pform(f->f1, P_APP) + " " + pform(f->f2, P_ATOM));
    case Formula::Kind::AppInt:
      return paren(prec > P_APP,
                   pform(f->f1, P_APP) + " " + pint(f->e1, P_ATOM));
    case Formula::Kind::Tuple: {
      std::string out = "<";
      for (size_t i = 0; i < f->items.size(); ++i) {
        if (i) out += ", ";
        out += pform(f->items[i], P_BIND);
      }
      return out + ">";
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const IntExprPtr& e) { return pint(e, P_BIND); }
std::string to_string(const FormulaPtr& f) { return pform(f, P_BIND); }

}  // namespace muhfl

#include "muhfl/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <variant>
#include <vector>

#include "muhfl/ops.hpp"
#include "muhfl/typecheck.hpp"

namespace muhfl {
namespace {

// ---------------------------------------------------------------- lexing

enum class Tk {
  Ident, Num,
  LParen, RParen, Comma, Semi, Colon, Dot, Arrow, Backslash,
  Or, And, Le, Lt, Gt, Ge, Eq, EqMu,
  Plus, Minus, Star,
  Angelic, Demonic,
  KwMu, KwExists, KwTrue, KwFalse, KwInt, KwProp, KwUnit,
  KwFix, KwFail, KwAssume, KwIf, KwThen, KwElse,
  PEnv, PDefs, PMain, PMaxar,
  End,
};

struct Token {
  Tk kind;
  std::string text;
  Int num{0};
  int line{1};
  int col{1};
};

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ", col " << col << ": " << msg;
  throw ParseError(os.str());
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$' ||
         c == '@';
}

std::vector<Token> lex(const std::string& src) {
  static const std::map<std::string, Tk> keywords = {
      {"mu", Tk::KwMu},         {"exists", Tk::KwExists}, {"true", Tk::KwTrue},
      {"false", Tk::KwFalse},   {"int", Tk::KwInt},       {"prop", Tk::KwProp},
      {"unit", Tk::KwUnit},     {"fix", Tk::KwFix},       {"fail", Tk::KwFail},
      {"assume", Tk::KwAssume}, {"if", Tk::KwIf},         {"then", Tk::KwThen},
      {"else", Tk::KwElse},
  };
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](Tk kind, const std::string& text, int l, int c) {
    Token t;
    t.kind = kind;
    t.text = text;
    t.line = l;
    t.col = c;
    out.push_back(t);
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, co = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word = src.substr(i, j - i);
      advance(j - i);
      auto it = keywords.find(word);
      if (it != keywords.end()) {
        push(it->second, word, l, co);
      } else {
        NameSupply::note_name(word);
        push(Tk::Ident, word, l, co);
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string digits = src.substr(i, j - i);
      advance(j - i);
      Token t;
      t.kind = Tk::Num;
      t.text = digits;
      t.num = Int(digits);
      t.line = l;
      t.col = co;
      out.push_back(t);
      continue;
    }
    if (c == '%') {
      size_t j = i + 1;
      while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
      std::string word = src.substr(i, j - i);
      advance(j - i);
      if (word == "%ENV")
        push(Tk::PEnv, word, l, co);
      else if (word == "%DEFS")
        push(Tk::PDefs, word, l, co);
      else if (word == "%MAIN")
        push(Tk::PMain, word, l, co);
      else if (word == "%MAXAR")
        push(Tk::PMaxar, word, l, co);
      else
        fail_at(l, co, "unknown section marker '" + word + "'");
      continue;
    }
    auto two = [&](size_t n) { return src.substr(i, n); };
    if (i + 1 < src.size()) {
      std::string s2 = two(2);
      if (s2 == "->") { advance(2); push(Tk::Arrow, s2, l, co); continue; }
      if (s2 == "\\/") { advance(2); push(Tk::Or, s2, l, co); continue; }
      if (s2 == "/\\") { advance(2); push(Tk::And, s2, l, co); continue; }
      if (s2 == "<=") { advance(2); push(Tk::Le, s2, l, co); continue; }
      if (s2 == ">=") { advance(2); push(Tk::Ge, s2, l, co); continue; }
    }
    if (i + 2 < src.size()) {
      std::string s3 = src.substr(i, 3);
      if (s3 == "[+]") { advance(3); push(Tk::Angelic, s3, l, co); continue; }
      if (s3 == "[*]") { advance(3); push(Tk::Demonic, s3, l, co); continue; }
      if (s3 == "=mu" && (i + 3 >= src.size() || !ident_char(src[i + 3]))) {
        advance(3);
        push(Tk::EqMu, s3, l, co);
        continue;
      }
    }
    switch (c) {
      case '(': advance(1); push(Tk::LParen, "(", l, co); continue;
      case ')': advance(1); push(Tk::RParen, ")", l, co); continue;
      case ',': advance(1); push(Tk::Comma, ",", l, co); continue;
      case ';': advance(1); push(Tk::Semi, ";", l, co); continue;
      case ':': advance(1); push(Tk::Colon, ":", l, co); continue;
      case '.': advance(1); push(Tk::Dot, ".", l, co); continue;
      case '\\': advance(1); push(Tk::Backslash, "\\", l, co); continue;
      case '<': advance(1); push(Tk::Lt, "<", l, co); continue;
      case '>': advance(1); push(Tk::Gt, ">", l, co); continue;
      case '=': advance(1); push(Tk::Eq, "=", l, co); continue;
      case '+': advance(1); push(Tk::Plus, "+", l, co); continue;
      case '-': advance(1); push(Tk::Minus, "-", l, co); continue;
      case '*': advance(1); push(Tk::Star, "*", l, co); continue;
      default: fail_at(l, co, std::string("unexpected character '") + c + "'");
    }
  }
  Token end;
  end.kind = Tk::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------- surface tree

struct PExpr;
using PExprP = std::shared_ptr<PExpr>;

struct PExpr {
  enum K {
    Id, Num, Bin, App, Lam, Mu, Exists, Tuple,
    TrueK, FalseK,
    Unit, Fail, Fix, Choice, Assume, If,
  } k;
  std::string name;   // Id; binder name; Bin/Choice operator text
  Int num{0};         // Num
  SortPtr sort;       // Lam/Mu binder annotation (formulas)
  TermSortPtr tsort;  // Lam/Fix binder annotation (terms)
  std::vector<PExprP> kids;
  int line{1};
  int col{1};
};

PExprP pnode(PExpr::K k, int line, int col) {
  auto p = std::make_shared<PExpr>();
  p->k = k;
  p->line = line;
  p->col = col;
  return p;
}

// ---------------------------------------------------------------- parser

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  bool term_mode = false;

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  Token next() {
    Token t = peek();
    if (t.kind != Tk::End) ++pos;
    return t;
  }
  bool at(Tk k) const { return peek().kind == k; }
  bool eat(Tk k) {
    if (at(k)) {
      ++pos;
      return true;
    }
    return false;
  }
  Token expect(Tk k, const std::string& what) {
    if (!at(k)) fail_at(peek().line, peek().col, "expected " + what);
    return next();
  }
  [[noreturn]] void fail_here(const std::string& msg) const {
    fail_at(peek().line, peek().col, msg);
  }

  // -------- sorts
  SortPtr parse_sort_atom() {
    if (eat(Tk::KwInt)) return int_sort();
    if (eat(Tk::KwProp)) return prop_sort();
    if (eat(Tk::LParen)) {
      std::vector<SortPtr> comps;
      comps.push_back(parse_sort());
      while (eat(Tk::Star)) comps.push_back(parse_sort());
      expect(Tk::RParen, "')'");
      if (comps.size() == 1) return comps[0];
      return product(comps);
    }
    fail_here("expected a sort");
  }
  SortPtr parse_sort() {
    SortPtr a = parse_sort_atom();
    if (eat(Tk::Arrow)) return arrow(a, parse_sort());
    return a;
  }

  TermSortPtr parse_tsort_atom() {
    if (eat(Tk::KwInt)) return int_tsort();
    if (eat(Tk::KwUnit)) return unit_tsort();
    if (eat(Tk::LParen)) {
      TermSortPtr s = parse_tsort();
      expect(Tk::RParen, "')'");
      return s;
    }
    fail_here("expected a term sort");
  }
  TermSortPtr parse_tsort() {
    TermSortPtr a = parse_tsort_atom();
    if (eat(Tk::Arrow)) return arrow_tsort(a, parse_tsort());
    return a;
  }

  // -------- expressions
  bool starts_atom() const {
    switch (peek().kind) {
      case Tk::Ident:
      case Tk::Num:
      case Tk::LParen:
      case Tk::KwTrue:
      case Tk::KwFalse:
        return true;
      case Tk::KwFail:
        return term_mode;
      // `-` never starts an application argument: `x - 1` is subtraction.
      // Negative-literal arguments are written parenthesized, `k (-5)`.
      default:
        return false;
    }
  }

  bool starts_binder() const {
    switch (peek().kind) {
      case Tk::Backslash:
      case Tk::KwMu:
      case Tk::KwExists:
        return true;
      case Tk::KwFix:
      case Tk::KwAssume:
      case Tk::KwIf:
        return term_mode;
      default:
        return false;
    }
  }

  PExprP parse_expr() {
    if (starts_binder()) return parse_binder();
    return term_mode ? parse_choice() : parse_or();
  }

  PExprP parse_binder() {
    const Token& t = peek();
    if (eat(Tk::Backslash)) {
      Token name = expect(Tk::Ident, "binder name");
      expect(Tk::Colon, "':'");
      auto p = pnode(PExpr::Lam, t.line, t.col);
      p->name = name.text;
      if (term_mode)
        p->tsort = parse_tsort();
      else
        p->sort = parse_sort();
      expect(Tk::Dot, "'.'");
      p->kids.push_back(parse_expr());
      return p;
    }
    if (eat(Tk::KwMu)) {
      Token name = expect(Tk::Ident, "binder name");
      expect(Tk::Colon, "':'");
      auto p = pnode(PExpr::Mu, t.line, t.col);
      p->name = name.text;
      p->sort = parse_sort();
      expect(Tk::Dot, "'.'");
      p->kids.push_back(parse_expr());
      return p;
    }
    if (eat(Tk::KwExists)) {
      Token name = expect(Tk::Ident, "binder name");
      auto p = pnode(PExpr::Exists, t.line, t.col);
      p->name = name.text;
      expect(Tk::Dot, "'.'");
      p->kids.push_back(parse_expr());
      return p;
    }
    if (eat(Tk::KwFix)) {
      Token name = expect(Tk::Ident, "binder name");
      expect(Tk::Colon, "':'");
      auto p = pnode(PExpr::Fix, t.line, t.col);
      p->name = name.text;
      p->tsort = parse_tsort();
      expect(Tk::Dot, "'.'");
      p->kids.push_back(parse_expr());
      return p;
    }
    if (eat(Tk::KwAssume)) {
      auto p = pnode(PExpr::Assume, t.line, t.col);
      expect(Tk::LParen, "'('");
      p->kids.push_back(parse_add());
      p->name = parse_cmp_op();
      p->kids.push_back(parse_add());
      expect(Tk::RParen, "')'");
      expect(Tk::Semi, "';'");
      p->kids.push_back(parse_expr());
      return p;
    }
    if (eat(Tk::KwIf)) {
      auto p = pnode(PExpr::If, t.line, t.col);
      p->kids.push_back(parse_add());
      p->name = parse_cmp_op();
      p->kids.push_back(parse_add());
      expect(Tk::KwThen, "'then'");
      p->kids.push_back(parse_expr());
      expect(Tk::KwElse, "'else'");
      p->kids.push_back(parse_expr());
      return p;
    }
    fail_here("expected a binder");
  }

  std::string parse_cmp_op() {
    switch (peek().kind) {
      case Tk::Le: next(); return "<=";
      case Tk::Lt: next(); return "<";
      case Tk::Gt: next(); return ">";
      case Tk::Ge: next(); return ">=";
      case Tk::Eq: next(); return "=";
      default: fail_here("expected a comparison operator");
    }
  }

  PExprP mk_bin(const std::string& op, PExprP a, PExprP b) {
    auto p = pnode(PExpr::Bin, a->line, a->col);
    p->name = op;
    p->kids = {a, b};
    return p;
  }

  PExprP parse_choice() {
    PExprP a = parse_or();
    while (at(Tk::Angelic) || at(Tk::Demonic)) {
      std::string op = next().text;
      auto p = pnode(PExpr::Choice, a->line, a->col);
      p->name = op;
      p->kids = {a, starts_binder() ? parse_binder() : parse_or()};
      a = p;
    }
    return a;
  }

  PExprP parse_or() {
    PExprP a = parse_and();
    while (eat(Tk::Or)) a = mk_bin("\\/", a, parse_and());
    return a;
  }
  PExprP parse_and() {
    PExprP a = parse_cmp();
    while (eat(Tk::And)) a = mk_bin("/\\", a, parse_cmp());
    return a;
  }
  PExprP parse_cmp() {
    PExprP a = parse_add();
    switch (peek().kind) {
      case Tk::Le: next(); return mk_bin("<=", a, parse_add());
      case Tk::Lt: next(); return mk_bin("<", a, parse_add());
      case Tk::Gt: next(); return mk_bin(">", a, parse_add());
      case Tk::Ge: next(); return mk_bin(">=", a, parse_add());
      case Tk::Eq: next(); return mk_bin("=", a, parse_add());
      default: return a;
    }
  }
  PExprP parse_add() {
    PExprP a = parse_mul();
    while (true) {
      if (eat(Tk::Plus))
        a = mk_bin("+", a, parse_mul());
      else if (at(Tk::Minus) && peek(1).kind != Tk::Num) {
        next();
        a = mk_bin("-", a, parse_mul());
      } else if (at(Tk::Minus)) {
        // `a - 3`: binary minus wins over a negative-literal atom.
        next();
        Token n = expect(Tk::Num, "number");
        auto lit = pnode(PExpr::Num, n.line, n.col);
        lit->num = n.num;
        a = mk_bin("-", a, lit);
      } else
        break;
    }
    return a;
  }
  PExprP parse_mul() {
    PExprP a = parse_app();
    while (eat(Tk::Star)) a = mk_bin("*", a, parse_app());
    return a;
  }

  // A `<` after a function atom is a tuple argument only if a well-formed
  // multi-component tuple follows; otherwise it is a comparison and the
  // application ends here.
  PExprP try_tuple() {
    size_t save = pos;
    try {
      Token t = expect(Tk::Lt, "'<'");
      auto p = pnode(PExpr::Tuple, t.line, t.col);
      p->kids.push_back(parse_expr());
      if (!at(Tk::Comma)) {
        pos = save;
        return nullptr;
      }
      while (eat(Tk::Comma)) p->kids.push_back(parse_expr());
      expect(Tk::Gt, "'>'");
      return p;
    } catch (const ParseError&) {
      pos = save;
      return nullptr;
    }
  }

  PExprP parse_app() {
    PExprP a = at(Tk::Lt) ? must_tuple() : parse_atom();
    while (true) {
      if (starts_atom()) {
        PExprP b = parse_atom();
        auto p = pnode(PExpr::App, a->line, a->col);
        p->kids = {a, b};
        a = p;
      } else if (at(Tk::Lt)) {
        PExprP b = try_tuple();
        if (!b) break;
        auto p = pnode(PExpr::App, a->line, a->col);
        p->kids = {a, b};
        a = p;
      } else
        break;
    }
    return a;
  }

  PExprP must_tuple() {
    PExprP p = try_tuple();
    if (!p) fail_here("expected a tuple");
    return p;
  }

  PExprP parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tk::Ident: {
        next();
        auto p = pnode(PExpr::Id, t.line, t.col);
        p->name = t.text;
        return p;
      }
      case Tk::Num: {
        next();
        auto p = pnode(PExpr::Num, t.line, t.col);
        p->num = t.num;
        return p;
      }
      case Tk::Minus: {
        next();
        Token n = expect(Tk::Num, "number");
        auto p = pnode(PExpr::Num, t.line, t.col);
        p->num = -n.num;
        return p;
      }
      case Tk::KwTrue: next(); return pnode(PExpr::TrueK, t.line, t.col);
      case Tk::KwFalse: next(); return pnode(PExpr::FalseK, t.line, t.col);
      case Tk::KwFail:
        if (!term_mode) fail_here("'fail' is only valid in terms");
        next();
        return pnode(PExpr::Fail, t.line, t.col);
      case Tk::LParen: {
        next();
        if (term_mode && eat(Tk::RParen)) return pnode(PExpr::Unit, t.line, t.col);
        PExprP p = parse_expr();
        expect(Tk::RParen, "')'");
        return p;
      }
      default:
        fail_here("expected an atom");
    }
  }
};

// ---------------------------------------------------------------- formula elaboration

struct ElabVal {
  FormulaPtr f;  // null when integer
  SortPtr sort;
  IntExprPtr e;  // null when formula
};

struct FormulaElab {
  TypeEnv env;

  IntExprPtr as_int(const PExprP& p) {
    ElabVal v = elab(p);
    if (!v.e) fail_at(p->line, p->col, "expected an integer expression");
    return v.e;
  }
  std::pair<FormulaPtr, SortPtr> as_formula(const PExprP& p) {
    ElabVal v = elab(p);
    if (!v.f) fail_at(p->line, p->col, "expected a formula, found an integer expression");
    return {v.f, v.sort};
  }

  ElabVal elab(const PExprP& p) {
    switch (p->k) {
      case PExpr::Id: {
        auto s = env.lookup(p->name);
        if (!s) fail_at(p->line, p->col, "unbound variable '" + p->name + "'");
        if ((*s)->kind == Sort::Kind::Int) return {nullptr, nullptr, ivar(p->name)};
        return {mk_var(p->name), *s, nullptr};
      }
      case PExpr::Num:
        return {nullptr, nullptr, ilit(p->num)};
      case PExpr::TrueK:
        return {mk_true(), prop_sort(), nullptr};
      case PExpr::FalseK:
        return {mk_false(), prop_sort(), nullptr};
      case PExpr::Bin: {
        const std::string& op = p->name;
        if (op == "+") return {nullptr, nullptr, iadd(as_int(p->kids[0]), as_int(p->kids[1]))};
        if (op == "-") return {nullptr, nullptr, isub(as_int(p->kids[0]), as_int(p->kids[1]))};
        if (op == "*") {
          // `*` is integer product inside arithmetic; multiplication of
          // formulas does not exist.
          return {nullptr, nullptr, imul(as_int(p->kids[0]), as_int(p->kids[1]))};
        }
        if (op == "<=")
          return {mk_le(as_int(p->kids[0]), as_int(p->kids[1])), prop_sort(), nullptr};
        if (op == "<" || op == ">" || op == ">=" || op == "=") {
          Formula::Kind k = op == "<"   ? Formula::Kind::LtS
                            : op == ">" ? Formula::Kind::GtS
                            : op == ">=" ? Formula::Kind::GeS
                                         : Formula::Kind::EqS;
          return {mk_cmp(k, as_int(p->kids[0]), as_int(p->kids[1])), prop_sort(), nullptr};
        }
        if (op == "\\/")
          return {mk_or(as_formula(p->kids[0]).first, as_formula(p->kids[1]).first), prop_sort(),
                  nullptr};
        if (op == "/\\")
          return {mk_and(as_formula(p->kids[0]).first, as_formula(p->kids[1]).first), prop_sort(),
                  nullptr};
        fail_at(p->line, p->col, "unknown operator '" + op + "'");
      }
      case PExpr::App: {
        auto [f, fs] = as_formula(p->kids[0]);
        if (fs->kind != Sort::Kind::Arrow)
          fail_at(p->line, p->col, "application of a non-function");
        if (fs->arg->kind == Sort::Kind::Int)
          return {mk_app_int(f, as_int(p->kids[1])), fs->res, nullptr};
        return {mk_app(f, as_formula(p->kids[1]).first), fs->res, nullptr};
      }
      case PExpr::Tuple: {
        std::vector<FormulaPtr> items;
        std::vector<SortPtr> sorts;
        for (auto& kid : p->kids) {
          auto [f, s] = as_formula(kid);
          items.push_back(f);
          sorts.push_back(s);
        }
        return {mk_tuple(items), product(sorts), nullptr};
      }
      case PExpr::Lam: {
        env.push(p->name, p->sort);
        auto [body, bs] = as_formula(p->kids[0]);
        env.pop();
        return {mk_abs(p->name, p->sort, body), arrow(p->sort, bs), nullptr};
      }
      case PExpr::Mu: {
        env.push(p->name, p->sort);
        auto [body, bs] = as_formula(p->kids[0]);
        env.pop();
        (void)bs;
        return {mk_mu(p->name, p->sort, body), p->sort, nullptr};
      }
      case PExpr::Exists: {
        env.push(p->name, int_sort());
        auto [body, bs] = as_formula(p->kids[0]);
        env.pop();
        (void)bs;
        return {mk_exists(p->name, body), prop_sort(), nullptr};
      }
      default:
        fail_at(p->line, p->col, "term-only construct in a formula");
    }
  }
};

FormulaPtr elaborate_formula(const PExprP& p, const TypeEnv& env) {
  FormulaElab el;
  el.env = env;
  return el.as_formula(p).first;
}

// ---------------------------------------------------------------- term elaboration

struct TermElab {
  std::vector<std::pair<std::string, TermSortPtr>> env;
  TypeEnv ienv;  // the integer-sorted prefix, for integer expressions

  std::optional<TermSortPtr> lookup(const std::string& n) const {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == n) return it->second;
    return std::nullopt;
  }

  IntExprPtr as_int(const PExprP& p) {
    if (p->k == PExpr::Num) return ilit(p->num);
    if (p->k == PExpr::Id) {
      auto s = lookup(p->name);
      if (!s) fail_at(p->line, p->col, "unbound variable '" + p->name + "'");
      if (!tsort_eq(*s, int_tsort()))
        fail_at(p->line, p->col, "expected an integer variable");
      return ivar(p->name);
    }
    if (p->k == PExpr::Bin) {
      const std::string& op = p->name;
      if (op == "+") return iadd(as_int(p->kids[0]), as_int(p->kids[1]));
      if (op == "-") return isub(as_int(p->kids[0]), as_int(p->kids[1]));
      if (op == "*") return imul(as_int(p->kids[0]), as_int(p->kids[1]));
    }
    fail_at(p->line, p->col, "expected an integer expression");
  }

  // One comparison lowered to a list of `e1 <= e2` guards that must all
  // hold (equality contributes two), plus its single-guard negation where
  // one exists.
  struct Cmp {
    std::vector<std::pair<IntExprPtr, IntExprPtr>> guards;
    std::optional<std::pair<IntExprPtr, IntExprPtr>> negation;
  };
  Cmp lower_cmp(const std::string& op, IntExprPtr a, IntExprPtr b) {
    Cmp c;
    if (op == "<=") {
      c.guards = {{a, b}};
      c.negation = {iadd(b, ilit(1)), a};
    } else if (op == "<") {
      c.guards = {{iadd(a, ilit(1)), b}};
      c.negation = {b, a};
    } else if (op == ">") {
      c.guards = {{iadd(b, ilit(1)), a}};
      c.negation = {a, b};
    } else if (op == ">=") {
      c.guards = {{b, a}};
      c.negation = {iadd(a, ilit(1)), b};
    } else {  // "="
      c.guards = {{a, b}, {b, a}};
      c.negation = std::nullopt;
    }
    return c;
  }

  std::pair<TermPtr, TermSortPtr> elab(const PExprP& p) {
    switch (p->k) {
      case PExpr::Unit:
        return {t_unit(), unit_tsort()};
      case PExpr::Fail:
        return {t_err(), unit_tsort()};
      case PExpr::Id: {
        auto s = lookup(p->name);
        if (!s) fail_at(p->line, p->col, "unbound variable '" + p->name + "'");
        if (tsort_eq(*s, int_tsort()))
          fail_at(p->line, p->col, "integer variable '" + p->name + "' used as a term");
        return {t_var(p->name), *s};
      }
      case PExpr::Lam: {
        push(p->name, p->tsort);
        auto [body, bs] = elab(p->kids[0]);
        pop();
        return {t_abs(p->name, p->tsort, body), arrow_tsort(p->tsort, bs)};
      }
      case PExpr::Fix: {
        push(p->name, p->tsort);
        auto [body, bs] = elab(p->kids[0]);
        pop();
        if (!tsort_eq(bs, p->tsort))
          fail_at(p->line, p->col, "fix body sort does not match its annotation");
        return {t_fix(p->name, p->tsort, body), p->tsort};
      }
      case PExpr::App: {
        auto [f, fs] = elab(p->kids[0]);
        if (fs->kind != TermSort::Kind::Arrow)
          fail_at(p->line, p->col, "application of a non-function");
        if (tsort_eq(fs->arg, int_tsort()))
          return {t_app_int(f, as_int(p->kids[1])), fs->res};
        auto [a, as] = elab(p->kids[1]);
        if (!tsort_eq(as, fs->arg))
          fail_at(p->line, p->col, "argument sort mismatch");
        return {t_app(f, a), fs->res};
      }
      case PExpr::Choice: {
        auto [a, as] = elab(p->kids[0]);
        auto [b, bs] = elab(p->kids[1]);
        if (!tsort_eq(as, unit_tsort()) || !tsort_eq(bs, unit_tsort()))
          fail_at(p->line, p->col, "choice operands must have sort unit");
        return {p->name == "[+]" ? t_angelic(a, b) : t_demonic(a, b), unit_tsort()};
      }
      case PExpr::Assume: {
        Cmp c = lower_cmp(p->name, as_int(p->kids[0]), as_int(p->kids[1]));
        auto [m, ms] = elab(p->kids[2]);
        if (!tsort_eq(ms, unit_tsort()))
          fail_at(p->line, p->col, "assume continuation must have sort unit");
        TermPtr out = m;
        for (auto it = c.guards.rbegin(); it != c.guards.rend(); ++it)
          out = t_assume(it->first, it->second, out);
        return {out, unit_tsort()};
      }
      case PExpr::If: {
        Cmp c = lower_cmp(p->name, as_int(p->kids[0]), as_int(p->kids[1]));
        if (!c.negation)
          fail_at(p->line, p->col, "equality is not supported in 'if' conditions");
        auto [m, ms] = elab(p->kids[2]);
        auto [n, ns] = elab(p->kids[3]);
        if (!tsort_eq(ms, unit_tsort()) || !tsort_eq(ns, unit_tsort()))
          fail_at(p->line, p->col, "'if' branches must have sort unit");
        TermPtr left = t_assume(c.guards[0].first, c.guards[0].second, m);
        TermPtr right = t_assume(c.negation->first, c.negation->second, n);
        return {t_angelic(left, right), unit_tsort()};
      }
      default:
        fail_at(p->line, p->col, "formula-only construct in a term");
    }
  }

  void push(const std::string& n, const TermSortPtr& s) {
    env.emplace_back(n, s);
    if (tsort_eq(s, int_tsort())) ienv.push(n, int_sort());
  }
  void pop() {
    auto [n, s] = env.back();
    env.pop_back();
    if (tsort_eq(s, int_tsort())) ienv.pop();
  }
};

}  // namespace

// ---------------------------------------------------------------- entry points

SortPtr parse_sort(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  SortPtr s = p.parse_sort();
  if (!p.at(Tk::End)) p.fail_here("trailing input after sort");
  return s;
}

FormulaPtr parse_formula(const std::string& text, const TypeEnv& env) {
  Parser p;
  p.toks = lex(text);
  PExprP e = p.parse_expr();
  if (!p.at(Tk::End)) p.fail_here("trailing input after formula");
  FormulaPtr f = elaborate_formula(e, env);
  std::set<std::string> taken;
  for (const auto& [n, s] : env.entries()) {
    (void)s;
    taken.insert(n);
  }
  return desugar(freshen(f, taken));
}

FormulaPtr parse_formula(const std::string& text) { return parse_formula(text, TypeEnv{}); }

TermPtr parse_term(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  p.term_mode = true;
  PExprP e = p.parse_expr();
  if (!p.at(Tk::End)) p.fail_here("trailing input after term");
  TermElab el;
  auto [t, s] = el.elab(e);
  (void)s;
  return t;
}

EquationSystem parse_system(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  EquationSystem es;
  p.expect(Tk::PEnv, "'%ENV'");
  while (p.at(Tk::Ident)) {
    Token name = p.next();
    p.expect(Tk::Colon, "':'");
    SortPtr s = p.parse_sort();
    p.expect(Tk::Semi, "';'");
    es.env.emplace_back(name.text, s);
  }
  TypeEnv genv;
  std::set<std::string> globals;
  for (const auto& [n, s] : es.env) {
    genv.push(n, s);
    globals.insert(n);
  }

  p.expect(Tk::PDefs, "'%DEFS'");
  while (p.at(Tk::Ident)) {
    Token name = p.next();
    Definition def;
    def.name = name.text;
    auto declared = es.env_lookup(def.name);
    if (!declared)
      fail_at(name.line, name.col, "definition '" + def.name + "' is not declared in %ENV");
    SortPtr rest = *declared;
    TypeEnv benv = genv;
    std::set<std::string> taken = globals;
    while (!p.at(Tk::EqMu)) {
      if (rest->kind != Sort::Kind::Arrow)
        p.fail_here("more parameters than the declared sort of '" + def.name + "' allows");
      ParamGroup g;
      if (p.eat(Tk::Lt)) {
        g.is_tuple = true;
        if (rest->arg->kind != Sort::Kind::Product)
          p.fail_here("tuple parameter for a non-product argument sort");
        size_t i = 0;
        do {
          Token m = p.expect(Tk::Ident, "parameter name");
          if (i >= rest->arg->comps.size())
            fail_at(m.line, m.col, "too many components in tuple parameter");
          g.members.push_back({m.text, rest->arg->comps[i]});
          ++i;
        } while (p.eat(Tk::Comma));
        p.expect(Tk::Gt, "'>'");
        if (i != rest->arg->comps.size())
          p.fail_here("too few components in tuple parameter");
      } else {
        Token m = p.expect(Tk::Ident, "parameter name");
        if (rest->arg->kind == Sort::Kind::Product)
          fail_at(m.line, m.col, "product argument requires a tuple parameter");
        g.is_tuple = false;
        g.members.push_back({m.text, rest->arg});
      }
      for (const auto& prm : g.members) {
        benv.push(prm.name, prm.sort);
        taken.insert(prm.name);
      }
      def.params.push_back(std::move(g));
      rest = rest->res;
    }
    p.expect(Tk::EqMu, "'=mu'");
    PExprP body = p.parse_expr();
    p.expect(Tk::Semi, "';'");
    def.body = desugar(freshen(elaborate_formula(body, benv), taken));
    es.defs.push_back(std::move(def));
  }

  p.expect(Tk::PMain, "'%MAIN'");
  PExprP main = p.parse_expr();
  p.expect(Tk::Semi, "';'");
  es.main = desugar(freshen(elaborate_formula(main, genv), globals));

  if (p.eat(Tk::PMaxar)) {
    Token n = p.expect(Tk::Num, "number");
    p.expect(Tk::Semi, "';'");
    es.maxar = static_cast<int>(n.num);
  }
  if (!p.at(Tk::End)) p.fail_here("trailing input after system");
  return es;
}

}  // namespace muhfl

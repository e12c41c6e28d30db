// muhfl: command-line driver for the muHFL(Z) toolkit.
//
// Exit codes: 0 success / valid, 1 invalid, 2 unknown verdict,
// 3 user error (parse, sort, or usage), 4 internal invariant failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "muhfl/eqsys.hpp"
#include "muhfl/fromdisj.hpp"
#include "muhfl/frontend.hpp"
#include "muhfl/ops.hpp"
#include "muhfl/parser.hpp"
#include "muhfl/printer.hpp"
#include "muhfl/semantics.hpp"
#include "muhfl/todisj.hpp"
#include "muhfl/typecheck.hpp"

namespace {

using namespace muhfl;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string extension(const std::string& path) {
  auto dot = path.rfind('.');
  return dot == std::string::npos ? "" : path.substr(dot);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot write file: " + out_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
}

int verdict_exit(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Valid: return 0;
    case Verdict::Kind::Invalid: return 1;
    default: return 2;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"muHFL(Z) toolkit"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  size_t fuel = SearchBudget{}.max_steps;
  int box = SearchBudget{}.exists_box;
  size_t states = SearchBudget{}.max_states;
  int maxar = 0;
  int approx_m = 0;
  bool no_simplify = false, no_flatten = false;

  auto* c_type = app.add_subcommand("typecheck", "sort-check a .hfl/.hes/.term file");
  c_type->add_option("file", in_path)->required();

  auto* c_eval = app.add_subcommand("eval", "decide validity of a formula or system");
  c_eval->add_option("file", in_path)->required();
  c_eval->add_option("--fuel", fuel, "search/iteration budget");
  c_eval->add_option("--box", box, "integer box radius for exists / order-0 tables");
  c_eval->add_option("--states", states, "distinct states remembered by the search");

  auto* c_raise = app.add_subcommand("raise", "translate a formula into the disjunctive fragment");
  c_raise->add_option("file", in_path)->required();
  c_raise->add_option("-o,--output", out_path);
  c_raise->add_flag("--no-simplify", no_simplify);

  auto* c_norm = app.add_subcommand("normalize", "turn a disjunctive formula into a normalized equation system");
  c_norm->add_option("file", in_path)->required();
  c_norm->add_option("-o,--output", out_path);
  c_norm->add_option("--maxar", maxar, "force a uniform predicate arity (>= the computed one)");

  auto* c_lower = app.add_subcommand("lower", "reduce the order of a normalized system by one");
  c_lower->add_option("file", in_path)->required();
  c_lower->add_option("-o,--output", out_path);
  c_lower->add_flag("--no-simplify", no_simplify);
  c_lower->add_flag("--no-flatten", no_flatten);

  auto* c_approx = app.add_subcommand("approx", "finite-stage approximation of a system");
  c_approx->add_option("file", in_path)->required();
  c_approx->add_option("-m", approx_m, "number of stages")->required();
  c_approx->add_option("-o,--output", out_path);

  auto* c_from = app.add_subcommand("from-term", "translate a game term into a formula");
  c_from->add_option("file", in_path)->required();
  c_from->add_option("-o,--output", out_path);

  auto* c_stats = app.add_subcommand("stats", "print size and order statistics");
  c_stats->add_option("file", in_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 3 : 0;
  }

  std::string ext = extension(in_path);

  if (c_type->parsed()) {
    std::string text = slurp(in_path);
    if (ext == ".hes") {
      EquationSystem es = parse_system(text);
      typecheck_system(es);
      std::cout << "ok: system with " << es.defs.size() << " definitions, order "
                << order_of_system(es) << "\n";
    } else if (ext == ".term") {
      TermPtr t = parse_term(text);
      std::cout << "ok: " << to_string(typecheck_term(t)) << "\n";
    } else {
      FormulaPtr f = parse_formula(text);
      check_closed_prop(f);
      std::cout << "ok: prop\n";
    }
    return 0;
  }

  if (c_eval->parsed()) {
    std::string text = slurp(in_path);
    SearchBudget budget;
    budget.max_steps = fuel;
    budget.exists_box = box;
    budget.max_states = states;
    Verdict v;
    if (ext == ".hes") {
      EquationSystem es = parse_system(text);
      typecheck_system(es);
      if (order_of_system(es) <= 0)
        v = kleene_eval(es, box, fuel);
      else
        v = search_valid(to_mu_formula(es), budget);
    } else {
      FormulaPtr f = parse_formula(text);
      check_closed_prop(f);
      v = search_valid(f, budget);
    }
    std::cout << v.serialize() << "\n";
    return verdict_exit(v);
  }

  if (c_raise->parsed()) {
    FormulaPtr f = parse_formula(slurp(in_path));
    check_closed_prop(f);
    emit(out_path, to_string(raise_top(f, !no_simplify)));
    return 0;
  }

  if (c_norm->parsed()) {
    FormulaPtr f = parse_formula(slurp(in_path));
    std::optional<int> over;
    if (maxar > 0) over = maxar;
    EquationSystem es = normalize(f, over);
    emit(out_path, print_system(es));
    return 0;
  }

  if (c_lower->parsed()) {
    EquationSystem es = parse_system(slurp(in_path));
    LowerOptions opts;
    opts.simplify = !no_simplify;
    opts.flatten = !no_flatten;
    LowerStats stats;
    EquationSystem low = lower_system(es, opts, &stats);
    emit(out_path, print_system(low));
    if (!out_path.empty()) emit(out_path + ".stats", stats.to_text());
    return 0;
  }

  if (c_approx->parsed()) {
    EquationSystem es = parse_system(slurp(in_path));
    typecheck_system(es);
    emit(out_path, print_system(m_approximation(es, approx_m)));
    return 0;
  }

  if (c_from->parsed()) {
    TermPtr t = parse_term(slurp(in_path));
    typecheck_term(t);
    emit(out_path, to_string(to_formula(t)));
    return 0;
  }

  if (c_stats->parsed()) {
    std::string text = slurp(in_path);
    if (ext == ".hes") {
      EquationSystem es = parse_system(text);
      typecheck_system(es);
      std::cout << "defs=" << es.defs.size() << "\n"
                << "order=" << order_of_system(es) << "\n"
                << "nodes=" << system_node_count(es) << "\n";
      if (es.maxar) std::cout << "maxar=" << *es.maxar << "\n";
      std::cout << "recursion_free=" << (recursion_free(es) ? "true" : "false") << "\n";
    } else {
      FormulaPtr f = parse_formula(text);
      typecheck(f);
      std::cout << "order=" << order_of_formula(f) << "\n"
                << "nodes=" << node_count(f) << "\n";
    }
    return 0;
  }

  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const muhfl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const muhfl::TypeError& e) {
    std::cerr << "sort error: " << e.what() << "\n";
    return 3;
  } catch (const muhfl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

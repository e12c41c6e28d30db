#pragma once

#include "muhfl/eqsys.hpp"
#include "muhfl/frontend.hpp"

namespace muhfl {

// All parsers freshen binders and lower comparison sugar.  Application vs
// integer application is resolved from sorts (binder annotations and %ENV
// declarations), so formulas with free variables need an environment.
SortPtr parse_sort(const std::string& text);
FormulaPtr parse_formula(const std::string& text);
FormulaPtr parse_formula(const std::string& text, const TypeEnv& env);
EquationSystem parse_system(const std::string& text);
TermPtr parse_term(const std::string& text);

}  // namespace muhfl

#pragma once

#include <string>

#include "muhfl/formula.hpp"

namespace muhfl {

std::string to_string(const IntExprPtr& e);
std::string to_string(const FormulaPtr& f);

}  // namespace muhfl

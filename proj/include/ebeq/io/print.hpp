#pragma once

#include "ebeq/core/expr.hpp"

#include <string>

namespace ebeq {

/// Infix rendering accepted back by parse(). Canonical trees print as num/den.
std::string print(const Expr& e);
std::string print(const canon::Form& f);

}  // namespace ebeq

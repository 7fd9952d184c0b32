#pragma once

#include "ebeq/core/expr.hpp"

#include <optional>
#include <vector>

namespace ebeq {

/// Linear equations  rows * c = rhs  over the field of rational functions in the parameters.
struct LinearSystem {
    std::vector<std::vector<canon::Form>> rows;
    std::vector<canon::Form> rhs;
};

/// Conditions for `e`, linear in `unknowns`, to vanish identically in every generator that
/// is not a parameter expression. One equation per monomial of the numerator.
LinearSystem linear_equations(const canon::Form& e, const std::vector<Sym>& unknowns);

/// General solution by Gauss-Jordan elimination. Free unknowns stay as themselves, every
/// pivot unknown is expressed through them. Empty when the system is inconsistent.
std::optional<std::vector<canon::Form>> solve(const LinearSystem& sys, const std::vector<Sym>& unknowns,
                                              const AssumptionSet& as = default_assumptions());

/// True when the generator involves only parameters and integer roots.
bool is_parameter_gen(const canon::Gen& g);

}  // namespace ebeq

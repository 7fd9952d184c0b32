#pragma once

#include "ebeq/core/ops.hpp"

#include <array>

namespace ebeq::jets {

/// First-order operator  c0 * D_first + c1 * D_second  over a chart, with normalized
/// coefficients.
struct LinOp {
    Chart chart = target_chart();
    std::array<Expr, 2> coeff{Expr(0), Expr(0)};

    /// The plain total derivative in one chart variable.
    static LinOp direction(const Chart& chart, int pos);
};

/// The source-variable derivatives expressed in the target chart.
struct OperatorSystem {
    LinOp d_t;
    LinOp d_x;
    /// t_y x_z - t_z x_y
    Expr jacobian;
};

/// Inverts the chain rule for t = t_of(y,z), x = x_of(y,z) by 2x2 Cramer elimination.
/// Throws SingularJacobian when the Jacobian determinant vanishes identically.
OperatorSystem solve_operator_system(const Expr& t_of, const Expr& x_of, const Chart& chart = target_chart(),
                                     const AssumptionSet& as = default_assumptions());

Expr apply(const LinOp& op, const Expr& e, const AssumptionSet& as = default_assumptions());
/// n-fold application, 1 <= n <= 4; coefficients are differentiated at every step.
Expr power(const LinOp& op, const Expr& e, int n, const AssumptionSet& as = default_assumptions());

}  // namespace ebeq::jets

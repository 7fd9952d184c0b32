#pragma once

#include "ebeq/transform/engine.hpp"

#include <array>

namespace ebeq::symmetry {

/// xi_t d_t + xi_x d_x + phi d_u with components in t, x and the jet u.
struct VectorField {
    Expr xi_t{0};
    Expr xi_x{0};
    Expr phi{0};
};

/// p1 ... p6 of the f, m independent group, stored 0-based.
struct SymmetryParams {
    std::array<Expr, 6> p{Expr(0), Expr(0), Expr(0), Expr(0), Expr(1), Expr(0)};

    static SymmetryParams identity() { return {}; }
    /// p1 ... p6 as parameters named p1 ... p6.
    static SymmetryParams symbolic();
    const Expr& operator[](int i) const { return p[i - 1]; }
    Expr& operator[](int i) { return p[i - 1]; }
};

/// y p2 + p4 + z (y p1 + p3), in the variables a, b (y, z by default).
Expr fundamental_solution(const SymmetryParams& p, const Expr& a = var("y"), const Expr& b = var("z"));

/// t = y + p6, x = z, u = p5 w + J. Throws NonInvertible when p5 = 0.
transform::PointTransformation finite_symmetry(const SymmetryParams& p);

/// p6 d_t + (p4 + p2 t + p3 x + p1 t x + p5 u) d_u.
VectorField generator(const SymmetryParams& p);

/// Prolonged coefficients phi^K for 0 <= |K| <= order (1 <= order <= 4); K = (0,0) is phi.
std::map<MultiIndex, Expr, GradedLess> prolong(const VectorField& v, int order,
                                               const AssumptionSet& as = default_assumptions());

/// Replaces every u_K with at least two t-derivatives through u_tt = -(f u_xx)_xx / m and
/// its derivatives.
Expr reduce_modulo(const Expr& e, const transform::EbEquation& eq, const JetFunction& u = transform::u_function(),
                   const AssumptionSet& as = default_assumptions());

/// pr v applied to the equation, before reduction.
Expr prolonged_action(const VectorField& v, const transform::EbEquation& eq,
                      const AssumptionSet& as = default_assumptions());
/// pr v (Delta) reduces to zero modulo Delta = 0.
bool check_infinitesimal_symmetry(const VectorField& v, const transform::EbEquation& eq,
                                  const AssumptionSet& as = default_assumptions());

/// The equation applied to u = t p2 + p4 + x (t p1 + p3).
Expr fundamental_residual(const SymmetryParams& p, const transform::EbEquation& eq = transform::EbEquation::classic());
bool verify_J3_solution(const transform::EbEquation& eq = transform::EbEquation::classic());

/// p after q for the group law t = y + p6, u = p5 w + J.
SymmetryParams compose(const SymmetryParams& p, const SymmetryParams& q);

/// d/d eps at eps = 0 of finite_symmetry(identity + eps e_i), written as a vector field
/// in (t, x, u). For i = 5 the scaling is p5 = 1 + eps.
VectorField tangent(int i);

/// u -> p5 w + sol with sol a function of (t, x); sol is carried over to (y, z).
transform::PointTransformation superposition_symmetry(const Expr& sol, const Expr& p5 = Expr(1));

/// Delta(p5 v + s) - p5 Delta(v) with v, s unknown functions of (t, x) and the rule Delta(s) = 0
/// applied; zero for every linear equation.
struct SuperpositionCheck {
    Expr split_defect;    // Delta(p5 v + s) - p5 Delta(v) - Delta(s)
    Expr reduced_defect;  // Delta(p5 v + s) - p5 Delta(v) after Delta(s) = 0
    bool holds = false;
};
SuperpositionCheck check_superposition(const transform::EbEquation& eq = transform::EbEquation::classic(),
                                       const AssumptionSet& as = default_assumptions());

}  // namespace ebeq::symmetry

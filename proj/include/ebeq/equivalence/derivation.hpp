#pragma once

#include "ebeq/io/parse.hpp"
#include "ebeq/transform/engine.hpp"

#include <map>
#include <string>
#include <vector>

namespace ebeq::equiv {

enum class Verdict { Verified, Refuted, AssumptionBlocked };
std::string to_string(Verdict v);

/// derived = factor * reference with factor a single term whose generators are all
/// known to be nonzero and which is free of w.
struct Comparison {
    bool proportional = false;
    std::optional<Expr> factor;
};
Comparison compare_up_to_factor(const Expr& derived, const Expr& reference, const AssumptionSet& as);

/// One constraint extraction of the equivalence derivation.
struct Step {
    std::string name;
    std::string what;
    Expr derived;
    /// The published counterpart, compared up to a nonzero factor.
    Expr reference;
    std::optional<Expr> factor;
    std::string solved_form;
    /// The solved form makes the derived constraint vanish.
    bool solution_checked = false;
    Verdict verdict = Verdict::Refuted;
    std::vector<std::string> notes;
};

struct DerivationTrace {
    std::vector<Step> steps;
    Verdict verdict() const;
};

/// Nonvanishing facts used throughout: R_y, S_z, L, h, the Jacobian, k1, k5, k2 - k3 k4,
/// k5 - k6 k7, 1 + k4 z, 1 + k7 y; f and m positive.
/// The facts are added to `base`, which picks the radical policy.
AssumptionSet derivation_assumptions(AssumptionSet base = AssumptionSet());

/// Parser table with R = R(y) when `r_of_y`, S = S(z) when `s_of_z`.
const SymbolTable& derivation_symbols(bool r_of_y, bool s_of_z);

Step step_gamma1(const AssumptionSet& as = derivation_assumptions());
Step step_wy_condition(const AssumptionSet& as = derivation_assumptions());
Step step_delta1(const AssumptionSet& as = derivation_assumptions());
Step step_fS_condition(const AssumptionSet& as = derivation_assumptions());
Step step_gamma3(const AssumptionSet& as = derivation_assumptions());

/// The w_yyyy coefficient for a concrete chart (R, S, L) of the classic equation.
Expr gamma1_for_chart(const transform::PointTransformation& T, const AssumptionSet& as = derivation_assumptions());

/// gamma1, wy, delta1, fS, gamma3.
DerivationTrace derive_classic(const AssumptionSet& as = derivation_assumptions());

/// Steps of the generalized argument: the varpi-power of the w_yyyy term, the w_yz
/// coefficient, and the image of the generalized equation under the y-Moebius chart.
DerivationTrace verify_theorem2_generalized(const AssumptionSet& as = derivation_assumptions());

/// Parameter values by name (k0 ... k11); missing names stay symbolic.
using ParamValues = std::map<std::string, Expr>;
Expr k(const ParamValues& values, const std::string& name);

/// t = (k5 y + k6)/(k7 y + 1), x = (k2 z + k3)/(k4 z + 1),
/// u = k1 (k2 - k3 k4)^(1/2) (k5 - k6 k7)^(1/2) / ((1 + k7 y)(1 + k4 z)) w + J.
transform::PointTransformation moebius_chart(const ParamValues& values, const Expr& J);
/// t = k5 y + k6 with the same x, u.
transform::PointTransformation theorem1_chart(const ParamValues& values, const Expr& J);

/// The published w-free-killing J: with 1 + k7 y in the denominator (k7_zero = false) or
/// with k7 = 0. Throws DegenerateChart when its denominator vanishes identically.
Expr compute_J(const ParamValues& values, bool k7_zero);

/// Re-solves constant_component = 0 for J over the ansatz
/// sum_{i,j<=3} c_ij y^i z^j / (den R * den S). Free constants stay as parameters c_ij.
Expr solve_J(const Expr& R, const Expr& S, const transform::EbEquation& eq = transform::EbEquation::classic(),
             const AssumptionSet& as = default_assumptions());

/// Transformed classic equation under the Theorem 1 chart with the published J.
struct Theorem1Result {
    transform::PointTransformation T;
    transform::LinearPde pde;
    std::optional<transform::EbForm> eb;
    bool y_free = false;
    Expr published_F;
    Expr published_M;
    /// derived / published, when constant
    std::optional<Expr> F_ratio;
    std::optional<Expr> M_ratio;
    /// Both ratios agree, i.e. the published pair is a rescaling of the derived one.
    bool published_pair_consistent = false;
};
Theorem1Result assemble_theorem1(const ParamValues& values = {},
                                 const transform::EbEquation& eq = transform::EbEquation::classic(),
                                 const AssumptionSet& as = derivation_assumptions());

/// The classic equation under the y-Moebius chart with J of the k7 != 0 family; reports
/// whether F and M came out y-dependent.
struct K7Obstruction {
    std::optional<transform::EbForm> eb;
    bool F_depends_on_y = false;
    bool M_depends_on_y = false;
};
K7Obstruction k7_obstruction(const ParamValues& values = {}, const AssumptionSet& as = derivation_assumptions());

}  // namespace ebeq::equiv

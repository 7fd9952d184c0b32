#pragma once

#include "ebeq/transform/engine.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ebeq::oracle {

using Point = std::array<double, 2>;  // (y, z)

/// Concrete data for numeric witnesses: parameter values, f and m bodies (in x, or t and x
/// for the generalized flavor), a test function w(y, z) and sample points.
struct NumericScene {
    std::string label;
    std::map<std::string, Q> params;
    transform::EbEquation eq;
    Expr w;
    std::vector<Point> samples;
    double tolerance = 1e-6;
    double clamp = 1e-12;
};

/// Evaluates expressions in y, z, parameters, jets of w and applications of f, m
/// (with derivative tags) at a point of a scene.
class SceneEvaluator {
public:
    explicit SceneEvaluator(const NumericScene& scene);

    /// Throws UnboundSymbol for anything the scene does not bind and DomainError off the real domain.
    double operator()(const Expr& e, const Point& p);

    /// Parameter values used instead of the scene's, for perturbation controls.
    void override_param(const std::string& name, const Q& value);

private:
    double param(const Sym& s) const;
    const Expr& w_jet(const MultiIndex& k);
    const Expr& body_derivative(const FuncSym& fn);

    const NumericScene& scene_;
    std::map<std::string, Q> overrides_;
    std::map<MultiIndex, Expr> w_jets_;
    std::map<FuncSym, Expr> bodies_;
};

double eval(const Expr& e, const NumericScene& scene, const Point& p);

/// A quantity that must stay away from zero at every sample, e.g. 1 + k4 z or the Jacobian.
struct Margin {
    std::string label;
    Expr value;
    double threshold;
};

/// 1 + k4 z and 1 + k7 y (0.1), S_z and the Jacobian (1e-3) for a chart.
std::vector<Margin> chart_margins(const transform::PointTransformation& T);
/// Throws SingularPoint naming the violated margin.
void check_margins(const std::vector<Margin>& margins, const NumericScene& scene, const Point& p);

/// The original residual (f u_xx)_xx + m u_tt at (t, x) = (R, S) for u = L w + J, by the
/// chain rule with w an unknown function.
Expr pulled_back_residual(const transform::EbEquation& eq, const transform::PointTransformation& T,
                          const AssumptionSet& as = default_assumptions());
/// mu ((F w_zz)_zz + M w_yy).
Expr eb_form_residual(const transform::EbForm& claim, const AssumptionSet& as = default_assumptions());

struct ConsistencyReport {
    double max_discrepancy = 0.0;
    std::size_t samples = 0;
    std::string worst_scene;
    Point worst_point{0.0, 0.0};
    bool passed = false;
};

/// Max relative discrepancy |a - b| / max(|a|, |b|, clamp) between the two residuals over all
/// samples. `claim_scale` multiplies parameters in the claimed side only.
ConsistencyReport residual_consistency(const transform::EbEquation& eq, const transform::PointTransformation& T,
                                       const transform::EbForm& claim, const std::vector<NumericScene>& scenes,
                                       const std::map<std::string, Q>& claim_scale = {},
                                       const AssumptionSet& as = default_assumptions());

/// Same with both sides already built.
ConsistencyReport compare_residuals(const Expr& lhs, const Expr& rhs, const std::vector<NumericScene>& scenes,
                                    const std::map<std::string, Q>& rhs_scale = {});

struct FdReport {
    double symbolic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
    bool passed = false;
};

/// Symbolic D_dir e against central differences with two Richardson levels.
FdReport fd_crosscheck(const Expr& e, const NumericScene& scene, const std::string& dir, const Point& p,
                       double h = 0.05, const AssumptionSet& as = default_assumptions());

/// The coefficient of w_K of a transformed equation read off numerically: the pulled-back
/// residual evaluated with w = (y - y0)^K0 (z - z0)^K1 / (K0! K1!) at (y0, z0).
double probe_coefficient(const Expr& pulled_back, const MultiIndex& K, const NumericScene& scene, const Point& p);

/// Symbolic setup of a witness: the equation with opaque f, m, the chart, the claimed EB form,
/// and the margins of the chart.
struct Witness {
    std::string name;
    transform::EbEquation eq;
    transform::PointTransformation T;
    transform::EbForm claim;
    std::vector<Margin> margins;
    /// Parameters drawn per scene.
    std::vector<std::string> params;
};

/// 0: identity chart, 1: the Theorem 1 chart, 2: the generalized y-Moebius chart,
/// 3: the finite symmetries of G_e. The claim comes from the symbolic pipeline.
Witness witness(int theorem, const AssumptionSet& as = default_assumptions());

/// Seeded random scenes for a witness: parameters with a real chart (k1, k5, k2 - k3 k4,
/// k5 - k6 k7 positive), smooth positive f and m, a trigonometric w, and samples inside the margins.
std::vector<NumericScene> random_scenes(const Witness& wt, int count, std::uint64_t seed, int samples_per_scene = 5);

}  // namespace ebeq::oracle

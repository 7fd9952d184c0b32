#pragma once

#include "ebeq/equivalence/derivation.hpp"

#include <array>

namespace ebeq::equiv {

/// (a z + b) / (c z + d) in projective form.
struct Moebius {
    Expr a{1}, b{0}, c{0}, d{1};

    static Moebius identity() { return {}; }
    /// Divides through by d. Throws ChartBoundary when d vanishes.
    Moebius normalized() const;
    Expr determinant() const;
    Expr operator()(const Expr& z) const;
    /// this after inner, i.e. the matrix product.
    Moebius after(const Moebius& inner) const;
    Moebius inverse() const;
};

/// Parameters of the Theorem 1 family without its chart boundary at k4 = 0:
///   t = k5 y + k6,  x = (k2 z + k3)/(k4 z + 1),  u = k1 (k5 x_z)^(1/2) w + J,
///   J = j0 + j1 t + j2 x + j3 t x.
/// The published J with constants k0, k8, k9, k10 is the same family for k4 != 0.
struct EquivParams {
    Expr k1{1};
    Moebius space;
    Expr k5{1};
    Expr k6{0};
    std::array<Expr, 4> j{Expr(0), Expr(0), Expr(0), Expr(0)};

    static EquivParams identity() { return {}; }
    /// From published constants k0 ... k10 (missing ones symbolic). Throws DegenerateChart at k4 = 0.
    static EquivParams from_published(const ParamValues& k);
    /// k0, k1, ..., k10 of the published chart. Throws DegenerateChart when k4 = 0.
    ParamValues published() const;
};

transform::PointTransformation chart(const EquivParams& p, const AssumptionSet& as = default_assumptions());

/// Reads the parameters back off a chart of the family. Throws NonInvertible when the
/// chart is outside it.
EquivParams extract(const transform::PointTransformation& T, const AssumptionSet& as = default_assumptions());

/// p after q: first (y,z,w) -> q -> then p.
transform::PointTransformation compose_charts(const transform::PointTransformation& p,
                                              const transform::PointTransformation& q,
                                              const AssumptionSet& as = default_assumptions());
/// Throws ChartBoundary when the composed space map leaves the d = 1 chart.
EquivParams compose(const EquivParams& p, const EquivParams& q, const AssumptionSet& as = default_assumptions());
EquivParams inverse(const EquivParams& p, const AssumptionSet& as = default_assumptions());

/// Componentwise equality of R, S, L, J after normalization.
bool same_chart(const transform::PointTransformation& a, const transform::PointTransformation& b,
                const AssumptionSet& as = default_assumptions());

}  // namespace ebeq::equiv

#include "ebeq/equivalence/group.hpp"

#include "ebeq/core/errors.hpp"
#include "ebeq/core/linsolve.hpp"
#include "ebeq/io/print.hpp"

namespace ebeq::equiv {

using transform::PointTransformation;

Moebius Moebius::normalized() const
{
    if (is_zero(d)) throw ChartBoundary("Moebius map with d = 0 has no chart (k2 z + k3)/(k4 z + 1)");
    return {normalize(a / d), normalize(b / d), normalize(c / d), Expr(1)};
}

Expr Moebius::determinant() const
{
    return normalize(a * d - b * c);
}

Expr Moebius::operator()(const Expr& z) const
{
    return normalize((a * z + b) / (c * z + d));
}

Moebius Moebius::after(const Moebius& q) const
{
    return {normalize(a * q.a + b * q.c), normalize(a * q.b + b * q.d), normalize(c * q.a + d * q.c),
            normalize(c * q.b + d * q.d)};
}

Moebius Moebius::inverse() const
{
    if (is_zero(determinant())) throw NonInvertible("Moebius map with vanishing determinant");
    return {d, normalize(-b), normalize(-c), a};
}

namespace {

const Expr Y = var("y");
const Expr Z = var("z");

Expr j_combination(const std::array<Expr, 4>& j, const Expr& t, const Expr& x)
{
    return j[0] + j[1] * t + j[2] * x + j[3] * t * x;
}

bool constant_in_yz(const Expr& e, const AssumptionSet& as)
{
    return is_zero(total_derivative(e, "y", as), as) && is_zero(total_derivative(e, "z", as), as);
}

// Reads a time map k5 y + k6 back.
std::pair<Expr, Expr> affine_part(const Expr& R, const AssumptionSet& as)
{
    Expr k5 = normalize(total_derivative(R, "y", as), as);
    Expr k6 = normalize(R - k5 * Y, as);
    if (!constant_in_yz(k5, as) || !constant_in_yz(k6, as) || is_zero(k5, as))
        throw NonInvertible("time map " + print(R) + " is not k5 y + k6");
    return {k5, k6};
}

Moebius moebius_part(const Expr& S, const AssumptionSet& as)
{
    const std::vector<Sym> unknowns{Sym::param("__a"), Sym::param("__b"), Sym::param("__c")};
    const Expr a = Expr::atom(unknowns[0]), b = Expr::atom(unknowns[1]), c = Expr::atom(unknowns[2]);
    const Expr eq = normalize(S * (c * Z + 1) - (a * Z + b), as);
    auto sol = solve(linear_equations(to_form(eq, as), unknowns), unknowns, as);
    if (!sol) throw NonInvertible("space map " + print(S) + " is not (k2 z + k3)/(k4 z + 1)");
    Moebius m{Expr::from_form((*sol)[0]), Expr::from_form((*sol)[1]), Expr::from_form((*sol)[2]), Expr(1)};
    if (!is_zero(normalize(m(Z) - S, as), as)) throw NonInvertible("space map " + print(S) + " is not Moebius");
    return m;
}

std::array<Expr, 4> j_part(const Expr& J, const Expr& R, const Expr& S, const AssumptionSet& as)
{
    std::vector<Sym> unknowns;
    std::array<Expr, 4> j;
    for (int i = 0; i < 4; ++i) {
        unknowns.push_back(Sym::param("__j" + std::to_string(i)));
        j[i] = Expr::atom(unknowns.back());
    }
    const Expr eq = normalize(J - j_combination(j, R, S), as);
    auto sol = solve(linear_equations(to_form(eq, as), unknowns), unknowns, as);
    if (!sol) throw NonInvertible("J = " + print(J) + " is not bilinear in t and x");
    std::array<Expr, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i] = Expr::from_form((*sol)[i]);
        if (contains(out[i], unknowns[i])) throw NonInvertible("J leaves a free constant");
    }
    return out;
}

Expr scale_root(const Expr& k5, const Expr& S, const AssumptionSet& as)
{
    return normalize(sqrt(k5 * total_derivative(S, "z", as)), as);
}

}  // namespace

PointTransformation chart(const EquivParams& p, const AssumptionSet& as)
{
    const Expr R = normalize(p.k5 * Y + p.k6, as);
    const Expr S = p.space(Z);
    const Expr L = normalize(p.k1 * scale_root(p.k5, S, as), as);
    return {R, S, L, normalize(j_combination(p.j, R, S), as)};
}

EquivParams extract(const PointTransformation& T, const AssumptionSet& as)
{
    EquivParams p;
    std::tie(p.k5, p.k6) = affine_part(normalize(T.R, as), as);
    p.space = moebius_part(normalize(T.S, as), as);
    p.k1 = normalize(T.L / scale_root(p.k5, p.space(Z), as), as);
    if (!constant_in_yz(p.k1, as)) throw NonInvertible("L = " + print(T.L) + " is not k1 (k5 x_z)^(1/2)");
    p.j = j_part(T.J, p.k5 * Y + p.k6, p.space(Z), as);
    return p;
}

PointTransformation compose_charts(const PointTransformation& p, const PointTransformation& q,
                                   const AssumptionSet& as)
{
    Bindings at_q;
    at_q.bind(Sym::indep("y"), q.R).bind(Sym::indep("z"), q.S);
    auto sub = [&](const Expr& e) { return substitute(e, at_q, as); };
    const Expr Lp = sub(p.L);
    return {sub(p.R), sub(p.S), normalize(Lp * q.L, as), normalize(Lp * q.J + sub(p.J), as)};
}

EquivParams compose(const EquivParams& p, const EquivParams& q, const AssumptionSet& as)
{
    EquivParams out;
    out.k5 = normalize(p.k5 * q.k5, as);
    out.k6 = normalize(p.k5 * q.k6 + p.k6, as);
    out.space = p.space.after(q.space).normalized();
    const auto composite = compose_charts(chart(p, as), chart(q, as), as);
    const Expr R = normalize(out.k5 * Y + out.k6, as);
    const Expr S = out.space(Z);
    out.k1 = normalize(composite.L / scale_root(out.k5, S, as), as);
    if (!constant_in_yz(out.k1, as)) throw NonInvertible("composed scale is not constant");
    out.j = j_part(composite.J, R, S, as);
    return out;
}

EquivParams inverse(const EquivParams& p, const AssumptionSet& as)
{
    EquivParams out;
    out.k5 = normalize(Expr(1) / p.k5, as);
    out.k6 = normalize(-p.k6 / p.k5, as);
    out.space = p.space.inverse().normalized();
    // w = (u - J) / L with (y, z) read off the inverse maps.
    const auto T = chart(p, as);
    const Expr R = normalize(out.k5 * Y + out.k6, as);
    const Expr S = out.space(Z);
    Bindings back;
    back.bind(Sym::indep("y"), R).bind(Sym::indep("z"), S);
    const Expr L = normalize(Expr(1) / substitute(T.L, back, as), as);
    const Expr J = normalize(-substitute(T.J, back, as) * L, as);
    out.k1 = normalize(L / scale_root(out.k5, S, as), as);
    if (!constant_in_yz(out.k1, as)) throw NonInvertible("inverse scale is not constant");
    out.j = j_part(J, R, S, as);
    return out;
}

bool same_chart(const PointTransformation& a, const PointTransformation& b, const AssumptionSet& as)
{
    return equivalent(a.R, b.R, as) && equivalent(a.S, b.S, as) && equivalent(a.L, b.L, as) &&
           equivalent(a.J, b.J, as);
}

EquivParams EquivParams::from_published(const ParamValues& values)
{
    const auto T = theorem1_chart(values, compute_J(values, true));
    EquivParams p;
    p.k5 = k(values, "k5");
    p.k6 = k(values, "k6");
    p.space = Moebius{k(values, "k2"), k(values, "k3"), k(values, "k4"), Expr(1)};
    p.k1 = k(values, "k1");
    p.j = j_part(T.J, T.R, T.S, default_assumptions());
    return p;
}

ParamValues EquivParams::published() const
{
    const Moebius s = space.normalized();
    if (is_zero(s.c)) throw DegenerateChart("the published J needs k4 != 0");
    const Expr A = normalize(s.a - s.b * s.c);
    // J = alpha + beta y + gamma x + delta y x in the original time variable y.
    const Expr alpha = normalize(j[0] + j[1] * k6);
    const Expr beta = normalize(j[1] * k5);
    const Expr gamma = normalize(j[2] + j[3] * k6);
    const Expr delta = normalize(j[3] * k5);
    ParamValues out;
    out["k1"] = k1;
    out["k2"] = s.a;
    out["k3"] = s.b;
    out["k4"] = s.c;
    out["k5"] = k5;
    out["k6"] = k6;
    out["k0"] = normalize(gamma * A);
    out["k9"] = normalize(delta * A);
    out["k8"] = normalize(alpha + gamma * s.a / s.c);
    out["k10"] = normalize(beta + delta * s.a / s.c);
    return out;
}

}  // namespace ebeq::equiv

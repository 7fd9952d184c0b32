#include "ebeq/symmetry/symmetry.hpp"

#include "ebeq/core/errors.hpp"

#include <set>

namespace ebeq::symmetry {

using transform::EbEquation;
using transform::PointTransformation;

SymmetryParams SymmetryParams::symbolic()
{
    SymmetryParams s;
    for (int i = 1; i <= 6; ++i) s[i] = param("p" + std::to_string(i));
    return s;
}

Expr fundamental_solution(const SymmetryParams& p, const Expr& a, const Expr& b)
{
    return normalize(a * p[2] + p[4] + b * (a * p[1] + p[3]));
}

PointTransformation finite_symmetry(const SymmetryParams& p)
{
    if (is_zero(p[5])) throw NonInvertible("p5 = 0 does not define an invertible map");
    return {normalize(var("y") + p[6]), var("z"), p[5], fundamental_solution(p)};
}

VectorField generator(const SymmetryParams& p)
{
    const Expr t = var("t"), x = var("x");
    return {p[6], Expr(0), normalize(p[4] + p[2] * t + p[3] * x + p[1] * t * x + p[5] * jet(transform::u_function()))};
}

std::map<MultiIndex, Expr, GradedLess> prolong(const VectorField& v, int order, const AssumptionSet& as)
{
    if (order < 1 || order > 4) throw std::invalid_argument("prolongation order must be 1 to 4");
    const auto& u = transform::u_function();
    const Chart& c = source_chart();
    const Expr characteristic = normalize(v.phi - v.xi_t * jet(u, {1, 0}) - v.xi_x * jet(u, {0, 1}), as);
    std::map<MultiIndex, Expr, GradedLess> out;
    for (int n = 0; n <= order; ++n) {
        for (int i = n; i >= 0; --i) {
            MultiIndex K{i, n - i};
            out[K] = normalize(total_derivative(characteristic, c, K, as) + v.xi_t * jet(u, {K[0] + 1, K[1]}) +
                                   v.xi_x * jet(u, {K[0], K[1] + 1}),
                               as);
        }
    }
    return out;
}

namespace {

std::set<Sym> jets_of(const Expr& e, const JetFunction& fn, const AssumptionSet& as)
{
    std::set<Sym> out;
    canon::visit(to_form(e, as), [&](const canon::Gen& g) {
        if (g->kind == canon::GenKind::Symbol && g->sym.is_jet() && g->sym.name() == fn.name &&
            g->sym.chart() == fn.chart)
            out.insert(g->sym);
        return true;
    });
    return out;
}

}  // namespace

Expr reduce_modulo(const Expr& e, const EbEquation& eq, const JetFunction& u, const AssumptionSet& as)
{
    const Expr t = var("t"), x = var("x");
    const Expr m = eq.m_at(t, x);
    const Expr bending = total_derivative(eq.f_at(t, x) * jet(u, {0, 2}), source_chart(), {0, 2}, as);
    const Expr utt = normalize(-bending / m, as);
    Expr cur = normalize(e, as);
    // Each round lowers the t-order of every replaced jet by two.
    for (int round = 0; round < 8; ++round) {
        Bindings b;
        bool any = false;
        for (const Sym& s : jets_of(cur, u, as)) {
            if (s.index()[0] < 2) continue;
            b.bind(s, total_derivative(utt, source_chart(), {s.index()[0] - 2, s.index()[1]}, as));
            any = true;
        }
        if (!any) return cur;
        cur = substitute(cur, b, as);
    }
    throw std::runtime_error("reduction modulo the equation did not terminate");
}

Expr prolonged_action(const VectorField& v, const EbEquation& eq, const AssumptionSet& as)
{
    const auto& u = transform::u_function();
    const Expr delta = eq.residual();
    std::vector<Expr> terms{v.xi_t * partial_derivative(delta, Sym::indep("t"), as),
                            v.xi_x * partial_derivative(delta, Sym::indep("x"), as)};
    for (const auto& [K, phiK] : prolong(v, 4, as)) {
        const Expr d = partial_derivative(delta, u(K), as);
        if (!is_zero(d, as)) terms.push_back(phiK * d);
    }
    return normalize(Expr::sum(std::move(terms)), as);
}

bool check_infinitesimal_symmetry(const VectorField& v, const EbEquation& eq, const AssumptionSet& as)
{
    return is_zero(reduce_modulo(prolonged_action(v, eq, as), eq, transform::u_function(), as), as);
}

Expr fundamental_residual(const SymmetryParams& p, const EbEquation& eq)
{
    return eq.apply(fundamental_solution(p, var("t"), var("x")));
}

bool verify_J3_solution(const EbEquation& eq)
{
    return is_zero(fundamental_residual(SymmetryParams::symbolic(), eq));
}

SymmetryParams compose(const SymmetryParams& p, const SymmetryParams& q)
{
    SymmetryParams r;
    r[5] = normalize(p[5] * q[5]);
    r[6] = normalize(p[6] + q[6]);
    r[1] = normalize(p[5] * q[1] + p[1]);
    r[2] = normalize(p[5] * q[2] + p[2]);
    r[3] = normalize(p[5] * q[3] + p[3] + q[6] * p[1]);
    r[4] = normalize(p[5] * q[4] + p[4] + q[6] * p[2]);
    return r;
}

VectorField tangent(int i)
{
    if (i < 1 || i > 6) throw std::invalid_argument("parameter index must be 1 to 6");
    const Sym eps = Sym::param("eps");
    SymmetryParams q;
    q[i] = i == 5 ? Expr(1) + Expr::atom(eps) : Expr::atom(eps);
    const auto T = finite_symmetry(q);
    Bindings at_identity;
    at_identity.bind(eps, Expr(0));
    Bindings rename;
    rename.bind(Sym::indep("y"), var("t"))
        .bind(Sym::indep("z"), var("x"))
        .bind(transform::w_function()(), jet(transform::u_function()));
    auto component = [&](const Expr& e) {
        return substitute(substitute(partial_derivative(e, eps), at_identity), rename);
    };
    return {component(T.R), component(T.S), component(T.L * jet(transform::w_function()) + T.J)};
}

PointTransformation superposition_symmetry(const Expr& sol, const Expr& p5)
{
    if (is_zero(p5)) throw NonInvertible("p5 = 0 does not define an invertible map");
    Bindings b;
    b.bind(Sym::indep("t"), var("y")).bind(Sym::indep("x"), var("z"));
    return {var("y"), var("z"), p5, substitute(sol, b)};
}

SuperpositionCheck check_superposition(const EbEquation& eq, const AssumptionSet& as)
{
    const JetFunction v{"v", source_chart()};
    const JetFunction s{"s", source_chart()};
    const Expr p5 = param("p5");
    const Expr combined = eq.apply(p5 * jet(v) + jet(s));
    SuperpositionCheck out;
    out.split_defect = normalize(combined - p5 * eq.apply(jet(v)) - eq.apply(jet(s)), as);
    out.reduced_defect = reduce_modulo(combined - p5 * eq.apply(jet(v)), eq, s, as);
    out.holds = is_zero(out.split_defect, as) && is_zero(out.reduced_defect, as);
    return out;
}

}  // namespace ebeq::symmetry

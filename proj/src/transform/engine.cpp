#include "ebeq/transform/engine.hpp"

#include "ebeq/core/errors.hpp"
#include "ebeq/core/linsolve.hpp"

#include <set>

namespace ebeq::transform {

using canon::Form;
using canon::Gen;

const JetFunction& w_function()
{
    static const JetFunction w{"w", target_chart()};
    return w;
}

const JetFunction& u_function()
{
    static const JetFunction u{"u", source_chart()};
    return u;
}

namespace {

Expr coefficient_at(const char* name, const std::optional<Expr>& body, Flavor flavor, const Expr& t, const Expr& x)
{
    std::vector<Expr> args;
    if (flavor == Flavor::Generalized) args.push_back(t);
    args.push_back(x);
    Expr applied = call(name, args);
    if (!body) return applied;
    Bindings b;
    std::vector<Sym> formals;
    if (flavor == Flavor::Generalized) formals.push_back(Sym::indep("t"));
    formals.push_back(Sym::indep("x"));
    b.bind_applied(name, formals, *body);
    return substitute(applied, b);
}

}  // namespace

Expr EbEquation::f_at(const Expr& t, const Expr& x) const
{
    return coefficient_at("f", f_body, flavor, t, x);
}

Expr EbEquation::m_at(const Expr& t, const Expr& x) const
{
    return coefficient_at("m", m_body, flavor, t, x);
}

Expr EbEquation::apply(const Expr& u) const
{
    const Expr t = var("t");
    const Expr x = var("x");
    const Expr uxx = total_derivative(u, source_chart(), {0, 2});
    const Expr utt = total_derivative(u, source_chart(), {2, 0});
    const Expr bending = total_derivative(f_at(t, x) * uxx, source_chart(), {0, 2});
    return normalize(bending + m_at(t, x) * utt);
}

Expr EbEquation::residual() const
{
    return apply(jet(u_function()));
}

Expr LinearPde::reassemble() const
{
    std::vector<Expr> terms{inhom};
    for (const auto& [k, c] : coeffs) terms.push_back(c * jet(w_function(), k));
    return normalize(Expr::sum(std::move(terms)));
}

namespace {

Expr image(const EbEquation& eq, const PointTransformation& T, const Expr& U, const AssumptionSet& as)
{
    auto ops = jets::solve_operator_system(T.R, T.S, target_chart(), as);
    const Expr uxx = jets::power(ops.d_x, U, 2, as);
    const Expr utt = jets::power(ops.d_t, U, 2, as);
    const Expr fa = normalize(eq.f_at(T.R, T.S), as);
    const Expr ma = normalize(eq.m_at(T.R, T.S), as);
    const Expr bending = jets::power(ops.d_x, normalize(fa * uxx, as), 2, as);
    return normalize(bending + ma * utt, as);
}

}  // namespace

LinearPde transform_pde(const EbEquation& eq, const PointTransformation& T, const AssumptionSet& as)
{
    const Expr U = T.L * jet(w_function()) + T.J;
    auto c = collect(image(eq, T, U, as), w_function(), as);
    return LinearPde{std::move(c.coeffs), c.rest};
}

Expr constant_component(const EbEquation& eq, const PointTransformation& T, const AssumptionSet& as)
{
    return image(eq, T, T.J, as);
}

namespace {

const std::set<MultiIndex> eb_keys{{0, 4}, {0, 3}, {0, 2}, {2, 0}};

Expr coeff_or_zero(const LinearPde& pde, MultiIndex k)
{
    auto it = pde.coeffs.find(k);
    return it == pde.coeffs.end() ? Expr(0) : it->second;
}

bool has_eb_shape(const LinearPde& pde, const AssumptionSet& as)
{
    if (!is_zero(pde.inhom, as)) return false;
    for (const auto& [k, c] : pde.coeffs) {
        if (eb_keys.count(k) == 0) return false;
    }
    return pde.coeffs.count({0, 4}) != 0 && pde.coeffs.count({2, 0}) != 0;
}

// Generators of `f` whose z-derivative does not vanish.
void z_generators(const Form& f, std::vector<Gen>& out)
{
    canon::TotalDerivative dz("z");
    auto consider = [&](const Gen& g) {
        for (const auto& h : out) {
            if (canon::compare(h, g) == 0) return;
        }
        if (!dz(canon::from_gen(g)).is_zero()) out.push_back(g);
    };
    for (const auto& t : f.num.terms) {
        for (const auto& x : t.mono) consider(x.gen);
    }
    for (const auto& x : f.den) consider(x.gen);
}

// F with F_z / F = rho as a product of powers of the candidate generators.
std::optional<Expr> integrate_log_derivative(const Form& rho, const std::vector<Gen>& gens, const AssumptionSet& as)
{
    canon::TotalDerivative dz("z");
    std::vector<Sym> unknowns;
    std::vector<Form> parts{canon::neg(rho)};
    for (std::size_t i = 0; i < gens.size(); ++i) {
        unknowns.push_back(Sym::param("__e" + std::to_string(i)));
        const Form g = canon::from_gen(gens[i]);
        parts.push_back(canon::mul(canon::from_sym(unknowns.back()), canon::mul(dz(g), canon::inv(g))));
    }
    const LinearSystem sys = linear_equations(canon::sum(parts), unknowns);
    auto sol = solve(sys, unknowns, as);
    if (!sol) return std::nullopt;
    // free exponents are set to zero: those generators are not needed
    canon::Rewriter drop_free(
        [&](const Sym& s) -> std::optional<Form> {
            for (const auto& u : unknowns) {
                if (u == s) return canon::zero();
            }
            return std::nullopt;
        },
        nullptr, as);
    Form F = canon::constant(Q(1));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto e = canon::constant_value(drop_free((*sol)[i]));
        if (!e) return std::nullopt;
        if (*e == 0) continue;
        if (!mpz_fits_slong_p(e->get_num_mpz_t()) || !mpz_fits_slong_p(e->get_den_mpz_t())) return std::nullopt;
        const Frac r(e->get_num().get_si(), e->get_den().get_si());
        F = canon::mul(F, canon::pow(canon::from_gen(gens[i]), r, as));
    }
    return Expr::from_form(F);
}

}  // namespace

std::optional<EbForm> match_eb_form(const LinearPde& pde, const AssumptionSet& as)
{
    if (!has_eb_shape(pde, as)) return std::nullopt;
    const Form c4 = to_form(coeff_or_zero(pde, {0, 4}), as);
    const Form c3 = to_form(coeff_or_zero(pde, {0, 3}), as);
    const Form c2 = to_form(coeff_or_zero(pde, {0, 2}), as);
    const Form c20 = to_form(coeff_or_zero(pde, {2, 0}), as);
    const Form rho = canon::mul(c3, canon::inv(canon::mul(canon::constant(Q(2)), c4)));
    canon::TotalDerivative dz("z");
    const Form consistency = canon::sub(canon::mul(c2, canon::inv(c4)), canon::add(dz(rho), canon::mul(rho, rho)));
    if (!consistency.is_zero()) return std::nullopt;

    std::vector<Gen> gens;
    z_generators(c4, gens);
    z_generators(c3, gens);
    z_generators(rho, gens);
    auto F = integrate_log_derivative(rho, gens, as);
    if (!F) return std::nullopt;
    const Form Ff = to_form(*F, as);
    const Form mu = canon::mul(c4, canon::inv(Ff));
    const Form M = canon::mul(c20, canon::inv(mu));
    EbForm out{*F, Expr::from_form(M), Expr::from_form(mu)};
    if (!check_eb_form(pde, out.F, out.M, as)) return std::nullopt;
    return out;
}

std::optional<Expr> check_eb_form(const LinearPde& pde, const Expr& F, const Expr& M, const AssumptionSet& as)
{
    if (!has_eb_shape(pde, as)) return std::nullopt;
    const Form Ff = to_form(F, as);
    if (Ff.is_zero()) return std::nullopt;
    canon::TotalDerivative dz("z");
    const Form mu = canon::mul(to_form(coeff_or_zero(pde, {0, 4}), as), canon::inv(Ff));
    const Form Fz = dz(Ff);
    const Form Fzz = dz(Fz);
    auto same = [&](MultiIndex k, const Form& expected) {
        return canon::equal(to_form(coeff_or_zero(pde, k), as), canon::mul(mu, expected));
    };
    if (!same({0, 3}, canon::mul(canon::constant(Q(2)), Fz))) return std::nullopt;
    if (!same({0, 2}, Fzz)) return std::nullopt;
    if (!same({2, 0}, to_form(M, as))) return std::nullopt;
    return Expr::from_form(mu);
}

}  // namespace ebeq::transform

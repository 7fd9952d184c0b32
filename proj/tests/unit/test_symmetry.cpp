#include "doctest.h"

#include "ebeq/core/errors.hpp"
#include "ebeq/equivalence/group.hpp"
#include "ebeq/io/parse.hpp"
#include "ebeq/io/print.hpp"
#include "ebeq/symmetry/symmetry.hpp"

using namespace ebeq;
using namespace ebeq::symmetry;
using transform::EbEquation;

namespace {

Expr U(MultiIndex k = {0, 0})
{
    return jet(transform::u_function(), k);
}

SymmetryParams named(const std::string& prefix)
{
    SymmetryParams s;
    for (int i = 1; i <= 6; ++i) s[i] = param(prefix + std::to_string(i));
    return s;
}

}  // namespace

TEST_CASE("prolongation of simple fields")
{
    for (const auto& [K, c] : prolong({Expr(1), Expr(0), Expr(0)}, 4)) CHECK(is_zero(c));
    for (const auto& [K, c] : prolong({Expr(0), Expr(0), U()}, 4)) CHECK(equivalent(c, U(K)));
    auto pr = prolong({Expr(0), Expr(0), parse("t*x")}, 4);
    CHECK(is_zero(pr.at({2, 0})));
    CHECK(is_zero(pr.at({0, 2})));
    CHECK(equivalent(pr.at({1, 1}), Expr(1)));
    CHECK(is_zero(pr.at({0, 4})));
    // The flow u -> u + eps t x differentiated at eps = 0.
    for (const auto& [K, c] : pr) CHECK(equivalent(c, total_derivative(parse("t*x"), source_chart(), K)));
    CHECK_THROWS(prolong({}, 5));
}

TEST_CASE("prolongation of a field moving x")
{
    // v = x d_x: phi^x = -u_x, phi^xx = -2 u_xx.
    auto pr = prolong({Expr(0), var("x"), Expr(0)}, 2);
    CHECK(equivalent(pr.at({0, 1}), -U({0, 1})));
    CHECK(equivalent(pr.at({0, 2}), parse("-2*u_xx")));
    CHECK(equivalent(pr.at({1, 0}), Expr(0)));
}

TEST_CASE("the G_e generator is a symmetry for symbolic f, m")
{
    const auto eq = EbEquation::classic();
    CHECK(check_infinitesimal_symmetry(generator(SymmetryParams::symbolic()), eq));
    CHECK(check_infinitesimal_symmetry({Expr(1), Expr(0), Expr(0)}, eq));
    CHECK_FALSE(check_infinitesimal_symmetry({Expr(0), var("x"), Expr(0)}, eq));
    CHECK_FALSE(check_infinitesimal_symmetry({Expr(0), Expr(0), parse("x^2")}, eq));
    // Time translation stops being a symmetry once f, m depend on t.
    CHECK_FALSE(check_infinitesimal_symmetry({Expr(1), Expr(0), Expr(0)}, EbEquation::generalized()));
    CHECK(check_infinitesimal_symmetry({Expr(0), Expr(0), U()}, EbEquation::generalized()));
}

TEST_CASE("the fundamental solution")
{
    CHECK(verify_J3_solution());
    CHECK(verify_J3_solution(EbEquation::generalized()));
    const auto eq = EbEquation::classic();
    CHECK(equivalent(eq.apply(parse("x^2")), parse("2*f''(x)")));
    CHECK(equivalent(eq.apply(parse("t^2")), parse("2*m(x)")));
}

TEST_CASE("finite symmetries fix f and m")
{
    CHECK(equiv::same_chart(finite_symmetry(SymmetryParams::identity()), {var("y"), var("z"), Expr(1), Expr(0)}));
    auto pde = transform_pde(EbEquation::classic(), finite_symmetry(SymmetryParams::symbolic()));
    auto eb = match_eb_form(pde);
    REQUIRE(eb);
    CHECK(equivalent(eb->F, parse("f(z)")));
    CHECK(equivalent(eb->M, parse("m(z)")));
    CHECK(equivalent(eb->mu, param("p5")));
    SymmetryParams zero;
    zero[5] = Expr(0);
    CHECK_THROWS_AS(finite_symmetry(zero), NonInvertible);
}

TEST_CASE("time scaling changes m")
{
    auto pde = transform_pde(EbEquation::classic(), {parse("k5*y + p6"), var("z"), Expr(1), Expr(0)});
    auto eb = match_eb_form(pde);
    REQUIRE(eb);
    CHECK(equivalent(eb->F, parse("f(z)")));
    CHECK_FALSE(equivalent(eb->M, parse("m(z)")));
    CHECK(equivalent(eb->M, parse("m(z)/k5^2")));
}

TEST_CASE("finite and infinitesimal pictures agree")
{
    for (int i = 1; i <= 6; ++i) {
        SymmetryParams e;
        e[5] = Expr(0);
        e[i] = Expr(1);
        auto t = tangent(i);
        auto g = generator(e);
        CHECK_MESSAGE(equivalent(t.xi_t, g.xi_t), i);
        CHECK_MESSAGE(equivalent(t.xi_x, g.xi_x), i);
        CHECK_MESSAGE(equivalent(t.phi, g.phi), i << ": " << print(t.phi) << " vs " << print(g.phi));
    }
}

TEST_CASE("group law of G_e")
{
    auto p = named("p"), q = named("q");
    CHECK(equiv::same_chart(equiv::compose_charts(finite_symmetry(p), finite_symmetry(q)),
                            finite_symmetry(compose(p, q))));
    auto id = compose(p, SymmetryParams::identity());
    for (int i = 1; i <= 6; ++i) CHECK(equivalent(id[i], p[i]));
}

TEST_CASE("superposition")
{
    auto check = check_superposition();
    CHECK(check.holds);
    CHECK(check_superposition(EbEquation::generalized()).holds);
    auto p = SymmetryParams::symbolic();
    p[6] = Expr(0);
    auto T = superposition_symmetry(fundamental_solution(p, var("t"), var("x")), p[5]);
    CHECK(equiv::same_chart(T, finite_symmetry(p)));
    CHECK(equiv::same_chart(superposition_symmetry(Expr(0), param("p5")),
                            {var("y"), var("z"), param("p5"), Expr(0)}));
}

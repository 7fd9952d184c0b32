#include "doctest.h"

#include "ebeq/core/errors.hpp"
#include "ebeq/io/parse.hpp"
#include "ebeq/io/print.hpp"
#include "ebeq/transform/engine.hpp"

using namespace ebeq;
using namespace ebeq::transform;

namespace {

Expr P(const char* s)
{
    return parse(s);
}

PointTransformation identity()
{
    return {var("y"), var("z"), Expr(1), Expr(0)};
}

PointTransformation theorem1_chart()
{
    return {P("k5*y + k6"), P("(k2*z + k3)/(k4*z + 1)"), P("k1*((k2 - k3*k4)*k5/(1 + k4*z)^2)^(1/2)"),
            P("(-k0 - k9*y + k4*(k8 + k10*y) + k4^2*(k8 + k10*y)*z)/(k4*(1 + k4*z))")};
}

}  // namespace

TEST_CASE("identity transformation expands the classic equation")
{
    auto pde = transform_pde(EbEquation::classic(), identity());
    CHECK(is_zero(pde.inhom));
    REQUIRE(pde.coeffs.size() == 4);
    CHECK(equivalent(pde.coeffs.at({0, 4}), P("f(z)")));
    CHECK(equivalent(pde.coeffs.at({0, 3}), P("2*f'(z)")));
    CHECK(equivalent(pde.coeffs.at({0, 2}), P("f''(z)")));
    CHECK(equivalent(pde.coeffs.at({2, 0}), P("m(z)")));
    auto eb = match_eb_form(pde);
    REQUIRE(eb);
    CHECK(equivalent(eb->F, P("f(z)")));
    CHECK(equivalent(eb->M, P("m(z)")));
    CHECK(equivalent(eb->mu, Expr(1)));
}

TEST_CASE("u = J contributes only to the constant component")
{
    PointTransformation T{P("y*(1 + z)"), P("z + z^2"), P("1 + y^2"), P("y^3*z + z^4")};
    auto pde = transform_pde(EbEquation::classic(), T);
    CHECK(equivalent(pde.inhom, constant_component(EbEquation::classic(), T)));
    PointTransformation no_j = T;
    no_j.J = Expr(0);
    auto homogeneous = transform_pde(EbEquation::classic(), no_j);
    CHECK(is_zero(homogeneous.inhom));
    CHECK(equivalent(pde.reassemble() - pde.inhom, homogeneous.reassemble()));
}

TEST_CASE("charts outside the EB shape are not matched")
{
    auto pde = transform_pde(EbEquation::classic(), {P("y + z"), P("z"), Expr(1), Expr(0)});
    CHECK_FALSE(match_eb_form(pde));
    auto shifted = transform_pde(EbEquation::classic(), {var("y"), var("z"), Expr(1), P("y^2")});
    CHECK_FALSE(match_eb_form(shifted));
    CHECK_THROWS_AS(transform_pde(EbEquation::classic(), {P("y + z"), P("2*y + 2*z"), Expr(1), Expr(0)}),
                    SingularJacobian);
}

TEST_CASE("theorem 1 chart gives a y-free EB form")
{
    auto pde = transform_pde(EbEquation::classic(), theorem1_chart());
    CHECK(is_zero(pde.inhom));
    auto eb = match_eb_form(pde);
    REQUIRE(eb);
    MESSAGE("F = " << print(factored(to_form(eb->F))));
    MESSAGE("M = " << print(factored(to_form(eb->M))));
    MESSAGE("mu = " << print(factored(to_form(eb->mu))));
    CHECK(is_zero(total_derivative(eb->F, "y")));
    CHECK(is_zero(total_derivative(eb->M, "y")));
}

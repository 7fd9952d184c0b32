#include "doctest.h"

#include "ebeq/core/errors.hpp"
#include "ebeq/core/ops.hpp"
#include "ebeq/io/parse.hpp"
#include "ebeq/io/print.hpp"

using namespace ebeq;

namespace {

Expr P(const char* s)
{
    return parse(s);
}

}  // namespace

TEST_CASE("ring identities vanish")
{
    CHECK(is_zero(P("(a+b)^2 - a^2 - 2*a*b - b^2")));
    CHECK_FALSE(is_zero(P("x + 1")));
    CHECK(is_zero(P("(a+b)^5 - (b+a)^3*(a+b)^2")));
    CHECK(is_zero(P("1/(a+b) + 1/(a-b) - 2*a/(a^2-b^2)")));
}

TEST_CASE("radicals merge exponents on equal bases")
{
    CHECK(equivalent(P("(S_z^(1/2))^2"), P("S_z")));
    CHECK(equivalent(P("sqrt2 * 0 + 2^(1/2)*2^(1/2)"), P("2")));
    CHECK(equivalent(P("8^(1/2)"), P("2*2^(1/2)")));
    CHECK(equivalent(P("(a+b)^(1/2)*(a+b)^(3/2)"), P("(a+b)^2")));
    CHECK(equivalent(P("((a^2 + 2*a*b + b^2))^(1/2)"), P("a+b")));
    CHECK(equivalent(P("(k1*((k2-k3*k4)*k5/(1+k4*z)^2)^(1/2))^2"), P("k1^2*(k2-k3*k4)*k5/(1+k4*z)^2")));
}

TEST_CASE("strict assumptions refuse unregistered radical rewrites")
{
    auto strict = AssumptionSet::strict();
    CHECK_THROWS_AS(to_form(P("(a^2)^(1/2)"), strict), AssumptionMissing);
    strict.assume_positive(to_form(P("a")));
    CHECK(canon::equal(to_form(P("(a^2)^(1/2)"), strict), to_form(P("a"))));
    CHECK_THROWS_AS(to_form(P("(-2)^(1/2)")), AssumptionMissing);
}

TEST_CASE("Moebius maps satisfy the Schwarzian-type ODE")
{
    Bindings b;
    b.bind_function(JetFunction{"S", target_chart()}, P("(k2*z+k3)/(k4*z+1)"));
    CHECK(is_zero(substitute(P("3*S_zz^2 - 2*S_z*S_zzz"), b)));
    Bindings r;
    r.bind_function(JetFunction{"R", target_chart()}, P("(k5*y+k6)/(k7*y+1)"));
    CHECK(is_zero(substitute(P("3*R_yy^2 - 2*R_y*R_yyy"), r)));
    Bindings sq;
    sq.bind_function(JetFunction{"S", target_chart()}, P("z^2"));
    CHECK(equivalent(substitute(P("-3*S_zz^2 + 2*S_z*S_zzz"), sq), P("-12")));
}

TEST_CASE("total derivatives follow the jet convention")
{
    CHECK(equivalent(total_derivative(P("f(S)"), "z"), P("f'(S)*S_z")));
    SymbolTable only_y;
    only_y.add_jet_function(JetFunction{"R", target_chart(), 0b01});
    CHECK(equivalent(total_derivative(parse("h*R_y^(1/2)", only_y), "z"), parse("h_z*R_y^(1/2)", only_y)));
    CHECK_FALSE(equivalent(total_derivative(P("h*R_y^(1/2)"), "z"), P("h_z*R_y^(1/2)")));
    CHECK(equivalent(total_derivative(total_derivative(P("w"), "y"), "z"), P("w_yz")));
    CHECK(equivalent(total_derivative(P("k1*y^3"), "y"), P("3*k1*y^2")));
    CHECK(equivalent(total_derivative(P("sin(y*z)"), "y"), P("z*cos(y*z)")));
}

TEST_CASE("substitution of L and h solutions")
{
    Bindings b;
    b.bind_function(JetFunction{"L", target_chart()}, P("h*R_y^(1/2)"));
    CHECK(is_zero(substitute(P("2*R_y*L_y - L*R_yy"), b)));
    Bindings c;
    c.bind_function(JetFunction{"h", target_chart(), 0b10}, P("k1*S_z^(1/2)"));
    CHECK(is_zero(substitute(P("2*h_z*S_z - h*S_zz"), c)));
    Bindings bad;
    bad.bind_function(JetFunction{"R", target_chart()}, P("y^2"));
    bad.bind(Sym::jet("R", target_chart(), {1, 0}), P("y"));
    CHECK_THROWS_AS(substitute(P("R_y"), bad), InconsistentBinding);
}

TEST_CASE("collect splits by jets")
{
    auto c = collect(P("a*w_zzzz + b*w + 3"), JetFunction{"w", target_chart()});
    REQUIRE(c.coeffs.size() == 2);
    CHECK(c.coeffs.begin()->first == MultiIndex{0, 0});
    CHECK(equivalent(c.coeffs.at({0, 4}), P("a")));
    CHECK(equivalent(c.rest, P("3")));
    CHECK_THROWS_AS(collect(P("1/w"), JetFunction{"w", target_chart()}), NotPolynomial);
    CHECK_THROWS_AS(collect(P("w^(1/2)"), JetFunction{"w", target_chart()}), NotPolynomial);
}

TEST_CASE("printing")
{
    CHECK(print(normalize(P("x+1"))) == "x + 1");
    CHECK(print(normalize(P("f*y^4/z^4"))) == "f*y^4/z^4");
}

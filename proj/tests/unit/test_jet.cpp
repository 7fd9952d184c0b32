#include "doctest.h"

#include "ebeq/core/errors.hpp"
#include "ebeq/io/parse.hpp"
#include "ebeq/jet/linop.hpp"
#include "generators.hpp"

using namespace ebeq;
using namespace ebeq::jets;

namespace {

const SymbolTable& r_of_y()
{
    static const SymbolTable table = [] {
        SymbolTable t;
        t.add_jet_function(JetFunction{"R", target_chart(), 0b01});
        return t;
    }();
    return table;
}

}  // namespace

TEST_CASE("identity chart gives the plain derivatives")
{
    auto ops = solve_operator_system(var("y"), var("z"));
    CHECK(equivalent(apply(ops.d_t, parse("w")), parse("w_y")));
    CHECK(equivalent(apply(ops.d_x, parse("w")), parse("w_z")));
    CHECK(equivalent(power(LinOp::direction(target_chart(), 1), parse("w"), 4), parse("w_zzzz")));
}

TEST_CASE("generic chart matches the Cramer closed forms")
{
    auto ops = solve_operator_system(parse("R"), parse("S"));
    const Expr varpi = parse("R_y*S_z - R_z*S_y");
    CHECK(equivalent(ops.jacobian, varpi));
    CHECK(equivalent(ops.d_t.coeff[0], parse("S_z") / varpi));
    CHECK(equivalent(ops.d_t.coeff[1], -parse("S_y") / varpi));
    CHECK(equivalent(ops.d_x.coeff[0], -parse("R_z") / varpi));
    CHECK(equivalent(ops.d_x.coeff[1], parse("R_y") / varpi));
    // inverse-function relations
    CHECK(equivalent(apply(ops.d_t, parse("R")), Expr(1)));
    CHECK(is_zero(apply(ops.d_t, parse("S"))));
    CHECK(is_zero(apply(ops.d_x, parse("R"))));
    CHECK(equivalent(apply(ops.d_x, parse("S")), Expr(1)));
}

TEST_CASE("R depending on y alone")
{
    const auto& tab = r_of_y();
    auto ops = solve_operator_system(parse("R", tab), parse("S", tab));
    CHECK(equivalent(ops.d_t.coeff[0], parse("1/R_y", tab)));
    CHECK(equivalent(ops.d_t.coeff[1], parse("-S_y/(R_y*S_z)", tab)));
    CHECK(is_zero(ops.d_x.coeff[0]));
    CHECK(equivalent(ops.d_x.coeff[1], parse("1/S_z", tab)));
    CHECK(equivalent(apply(ops.d_x, parse("w")), parse("w_z/S_z")));

    auto c = collect(power(ops.d_t, parse("L*w", tab), 2), JetFunction{"w", target_chart()});
    CHECK(equivalent(c.coeffs.at({1, 1}), parse("-2*S_y*L/(R_y^2*S_z)", tab)));
}

TEST_CASE("squared chain-rule operator")
{
    LinOp op;
    op.coeff = {Expr(0), normalize(parse("1/S_z"))};
    CHECK(equivalent(power(op, parse("w"), 2), parse("w_zz/S_z^2 - S_zz/S_z^3*w_z")));
}

TEST_CASE("fourth power of d_x has the R_z^4/varpi^4 term")
{
    auto ops = solve_operator_system(parse("R"), parse("S"));
    auto c = collect(power(ops.d_x, parse("w"), 4), JetFunction{"w", target_chart()});
    CHECK(equivalent(c.coeffs.at({4, 0}), parse("R_z^4/(R_y*S_z - R_z*S_y)^4")));
    CHECK_FALSE(equivalent(c.coeffs.at({4, 0}), parse("R_z^4/(R_y*S_z - R_z*S_y)")));
}

TEST_CASE("singular chart is rejected")
{
    CHECK_THROWS_AS(solve_operator_system(parse("y+z"), parse("2*y+2*z")), SingularJacobian);
}

TEST_CASE("operator properties on random expressions")
{
    testing::ExprGen gen(0x5eed01);
    const Expr mobius_t = parse("(2*y+1)/(y+3)");
    const Expr mobius_x = parse("y + z^2 + 1");
    auto ops = solve_operator_system(mobius_t, mobius_x);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const Expr e1 = gen.expr(2);
        const Expr e2 = gen.expr(2);
        const Expr a = Expr(Q(static_cast<long>(gen.pick(9)) - 4, 3));
        for (const LinOp* op : {&ops.d_t, &ops.d_x}) {
            CHECK(equivalent(apply(*op, a * e1 + e2), a * apply(*op, e1) + apply(*op, e2)));
            CHECK(equivalent(apply(*op, e1 * e2), e1 * apply(*op, e2) + apply(*op, e1) * e2));
        }
        if (i % 6 == 0) CHECK(equivalent(power(ops.d_x, e1, 4), apply(ops.d_x, power(ops.d_x, e1, 3))));
        ++checked;
    }
    CHECK(checked == 60);
}

#include "doctest.h"

#include "ebeq/core/errors.hpp"
#include "ebeq/equivalence/group.hpp"
#include "ebeq/io/print.hpp"

#include <random>

using namespace ebeq;
using namespace ebeq::equiv;
using namespace ebeq::transform;

namespace {

class ParamDraw {
public:
    explicit ParamDraw(std::uint64_t seed) : rng_(seed) {}

    Expr rational()
    {
        std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
        int n = 0;
        while (n == 0) n = num(rng_);
        return Expr(Q(n, den(rng_)));
    }

    /// A real chart away from every boundary: k1, k5 and the determinant nonzero, and
    /// k5 times the determinant positive so that the scale of u is real.
    EquivParams params()
    {
        EquivParams p;
        p.k1 = rational();
        p.k5 = rational();
        p.k6 = rational();
        do {
            p.space = Moebius{rational(), rational(), rational(), Expr(1)};
        } while (is_zero(p.space.determinant()) || to_form(p.space.determinant() * p.k5).num.terms[0].coeff < 0);
        for (auto& c : p.j) c = rational();
        return p;
    }

private:
    std::mt19937_64 rng_;
};

const PointTransformation& identity_chart()
{
    static const PointTransformation id{var("y"), var("z"), Expr(1), Expr(0)};
    return id;
}

}  // namespace

TEST_CASE("the chart of the identity parameters is the identity")
{
    CHECK(same_chart(chart(EquivParams::identity()), identity_chart()));
    ParamDraw d(7);
    auto p = d.params();
    CHECK(same_chart(chart(compose(EquivParams::identity(), p)), chart(p)));
    CHECK(same_chart(chart(compose(p, EquivParams::identity())), chart(p)));
}

TEST_CASE("Moebius maps compose as matrices")
{
    Moebius p{param("a"), param("b"), param("c"), Expr(1)};
    Moebius q{param("e"), param("g"), param("h"), Expr(1)};
    const Expr z = var("z");
    CHECK(is_zero(p.after(q)(z) - p(q(z))));
    CHECK(is_zero(p.inverse()(p(z)) - z));
    EquivParams x1, x2;
    x1.space = Moebius{Expr(1), Expr(0), Expr(1), Expr(1)};
    x2.space = Moebius{Expr(1), Expr(-1), Expr(0), Expr(1)};
    CHECK_THROWS_AS(compose(x1, x2), ChartBoundary);
}

TEST_CASE("published constants convert both ways")
{
    auto p = EquivParams::from_published({});
    CHECK(same_chart(chart(p), theorem1_chart({}, compute_J({}, true))));
    auto back = p.published();
    for (const char* name : {"k0", "k1", "k2", "k3", "k4", "k5", "k6", "k8", "k9", "k10"})
        CHECK_MESSAGE(equivalent(back.at(name), param(name)), name << " -> " << print(back.at(name)));
    CHECK_THROWS_AS(EquivParams::from_published({{"k4", Expr(0)}}), DegenerateChart);
    EquivParams flat;
    CHECK_THROWS_AS(flat.published(), DegenerateChart);
}

TEST_CASE("the family is closed: compositions keep the EB form y-free")
{
    ParamDraw d(11);
    auto p = compose(d.params(), d.params());
    auto pde = transform_pde(EbEquation::classic(), chart(p));
    auto eb = match_eb_form(pde);
    REQUIRE(eb);
    CHECK(is_zero(total_derivative(eb->F, "y")));
    CHECK(is_zero(total_derivative(eb->M, "y")));
}

TEST_CASE("inverse and associativity on random draws")
{
    ParamDraw d(2024);
    int inverses = 0, triples = 0, boundaries = 0;
    while (inverses < 100) {
        auto p = d.params();
        if (is_zero(p.space.a)) continue;
        auto q = inverse(p);
        const bool left = same_chart(chart(compose(p, q)), identity_chart());
        const bool right = same_chart(chart(compose(q, p)), identity_chart());
        CHECK(left);
        CHECK(right);
        ++inverses;
    }
    while (triples < 30) {
        auto a = d.params(), b = d.params(), c = d.params();
        try {
            auto lhs = chart(compose(compose(a, b), c));
            auto rhs = chart(compose(a, compose(b, c)));
            CHECK(same_chart(lhs, rhs));
            CHECK(same_chart(lhs, compose_charts(chart(a), compose_charts(chart(b), chart(c)))));
            ++triples;
        } catch (const ChartBoundary&) {
            ++boundaries;
        }
    }
    MESSAGE(boundaries << " draws hit the chart boundary");
}

TEST_CASE("extract rejects charts outside the family")
{
    CHECK_THROWS_AS(extract({parse("y^2"), var("z"), Expr(1), Expr(0)}), NonInvertible);
    CHECK_THROWS_AS(extract({var("y"), parse("z^2"), Expr(1), Expr(0)}), NonInvertible);
    CHECK_THROWS_AS(extract({var("y"), var("z"), var("z"), Expr(0)}), NonInvertible);
    CHECK_THROWS_AS(extract({var("y"), var("z"), Expr(1), parse("y^2")}), NonInvertible);
}

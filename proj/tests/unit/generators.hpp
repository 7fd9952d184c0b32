#pragma once

// Random expression generator shared by the property tests.

#include "ebeq/core/errors.hpp"
#include "ebeq/core/ops.hpp"

#include <random>

namespace ebeq::testing {

class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed, bool with_functions = true) : rng_(seed), functions_(with_functions) {}

    Expr atom()
    {
        static const JetFunction R{"R", target_chart()};
        static const JetFunction S{"S", target_chart()};
        switch (pick(functions_ ? 9 : 5)) {
        case 0: return var("y");
        case 1: return var("z");
        case 2: return param("a");
        case 3: return param("b");
        case 4: return Expr(Q(pick(7) + 1, pick(3) + 1));
        case 5: return jet(R, {static_cast<int>(pick(2)), static_cast<int>(pick(2))});
        case 6: return jet(S, {0, static_cast<int>(pick(3))});
        case 7: return call("f", {jet(S)});
        default: return call("sin", {var("y") + param("a")});
        }
    }

    Expr expr(int depth = 3)
    {
        if (depth <= 0 || pick(4) == 0) return atom();
        switch (pick(6)) {
        case 0:
        case 1: return expr(depth - 1) + expr(depth - 1);
        case 2:
        case 3: return expr(depth - 1) * expr(depth - 1);
        case 4: return expr(depth - 1) / positive(depth - 1);
        default: return pow(positive(depth - 1), Frac(static_cast<std::int64_t>(pick(3)) + 1, 2));
        }
    }

    /// Something that is nonzero as a rational function: a sum of squares plus one.
    Expr positive(int depth)
    {
        Expr e = expr(depth);
        return Expr(1) + e * e;
    }

    std::uint64_t pick(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    bool functions_;
};

}  // namespace ebeq::testing

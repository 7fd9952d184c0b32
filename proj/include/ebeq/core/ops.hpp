#pragma once

#include "ebeq/core/expr.hpp"

#include <map>
#include <string>

namespace ebeq {

Expr normalize(const Expr& e, const AssumptionSet& as = default_assumptions());
bool is_zero(const Expr& e, const AssumptionSet& as = default_assumptions());
bool equivalent(const Expr& a, const Expr& b, const AssumptionSet& as = default_assumptions());

Expr total_derivative(const Expr& e, const std::string& dir, const AssumptionSet& as = default_assumptions());
/// Iterated total derivative D_first^k0 D_second^k1 in the given chart.
Expr total_derivative(const Expr& e, const Chart& chart, MultiIndex k,
                      const AssumptionSet& as = default_assumptions());
/// Derivative in one symbol with every other symbol held fixed.
Expr partial_derivative(const Expr& e, const Sym& s, const AssumptionSet& as = default_assumptions());

/// Simultaneous substitution rules.
class Bindings {
public:
    /// Replace one atom: an independent variable, a parameter or a single jet atom.
    Bindings& bind(const Sym& s, Expr value);
    /// Replace an unknown function; each of its jet atoms becomes the matching total
    /// derivative of `value` in the function's chart.
    Bindings& bind_function(const JetFunction& fn, Expr value);
    /// Replace applications name(a1, ..., an) with `body` in which `formals` are set to
    /// the arguments. Derivative tags become partial derivatives in the formals.
    Bindings& bind_applied(const std::string& name, std::vector<Sym> formals, Expr body);

    struct Applied {
        std::vector<Sym> formals;
        Expr body;
    };

    const std::map<Sym, Expr>& atoms() const { return atoms_; }
    const std::vector<std::pair<JetFunction, Expr>>& functions() const { return functions_; }
    const std::map<std::string, Applied>& applied() const { return applied_; }
    bool empty() const { return atoms_.empty() && functions_.empty() && applied_.empty(); }

private:
    std::map<Sym, Expr> atoms_;
    std::vector<std::pair<JetFunction, Expr>> functions_;
    std::map<std::string, Applied> applied_;
};

Expr substitute(const Expr& e, const Bindings& b, const AssumptionSet& as = default_assumptions());

/// Graded order on multi-indices, y before z: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
struct GradedLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const
    {
        if (order(a) != order(b)) return order(a) < order(b);
        return a[0] > b[0];
    }
};

/// Coefficients of a linear expression in the jets of one function.
struct JetCollection {
    std::map<MultiIndex, Expr, GradedLess> coeffs;
    /// The part free of the family.
    Expr rest;
};

/// Splits `e` by the jets of `family`. Throws NotPolynomial when the family occurs in a
/// denominator, a radical, a function argument or nonlinearly.
JetCollection collect(const Expr& e, const JetFunction& family, const AssumptionSet& as = default_assumptions());

/// Coefficients of a linear expression in the applications of function `name`, keyed
/// by derivative tags.
struct ApplyCollection {
    std::map<std::vector<int>, Expr> coeffs;
    Expr rest;
};

ApplyCollection collect_applications(const Expr& e, const std::string& name,
                                     const AssumptionSet& as = default_assumptions());

/// True when the jets of `family` or applications of a function named `family.name`
/// occur anywhere in `e`.
bool depends_on(const Expr& e, const std::string& name);
/// True when `e` contains the independent variable or parameter `s` anywhere.
bool contains(const Expr& e, const Sym& s);

/// Numeric evaluation; symbols are looked up in `values`, applications of non-builtin
/// functions in `functions`.
double evaluate(const Expr& e, const canon::SymbolValues& values, const canon::FunctionValues& functions = {});

}  // namespace ebeq

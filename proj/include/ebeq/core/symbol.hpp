#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ebeq {

/// Derivative orders with respect to the two variables of a chart.
using MultiIndex = std::array<int, 2>;

inline int order(const MultiIndex& k) { return k[0] + k[1]; }

/// Ordered pair of independent variable names, e.g. (y, z) or (t, x).
struct Chart {
    std::string first;
    std::string second;

    /// 0 or 1 when `var` belongs to the chart, -1 otherwise.
    int position(std::string_view var) const
    {
        if (var == first) return 0;
        if (var == second) return 1;
        return -1;
    }
    const std::string& var(int pos) const { return pos == 0 ? first : second; }

    friend bool operator==(const Chart&, const Chart&) = default;
    friend auto operator<=>(const Chart&, const Chart&) = default;
};

/// The chart of the transformed equation.
const Chart& target_chart();
/// The chart of the original equation.
const Chart& source_chart();

enum class SymKind { IndepVar, Jet, Param, Function };

/// A named indeterminate: independent variable, jet atom, parameter or function symbol.
class Sym {
public:
    Sym() = default;

    static Sym indep(std::string name);
    static Sym param(std::string name);
    /// Jet atom of an unknown function. `deps` is a bit mask over the chart positions;
    /// the index must vanish in directions the function does not depend on.
    static Sym jet(std::string func, Chart chart, MultiIndex index = {0, 0}, unsigned deps = 0b11);
    static Sym function(std::string name, int arity);

    SymKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Chart& chart() const { return chart_; }
    const MultiIndex& index() const { return index_; }
    unsigned deps() const { return deps_; }
    int arity() const { return arity_; }

    bool is_jet() const { return kind_ == SymKind::Jet; }
    bool depends_on(int pos) const { return pos >= 0 && ((deps_ >> pos) & 1U) != 0; }
    /// Same jet function with a different multi-index.
    Sym with_index(MultiIndex index) const;
    /// True when both are jets of one function (name, chart, dependencies).
    bool same_function(const Sym& other) const;

    /// Printed form: `R_yyz`, `k5`, `y`.
    std::string str() const;
    std::size_t hash() const;

    friend bool operator==(const Sym&, const Sym&) = default;
    friend std::strong_ordering operator<=>(const Sym& a, const Sym& b);

private:
    SymKind kind_ = SymKind::Param;
    std::string name_;
    Chart chart_;
    MultiIndex index_{0, 0};
    unsigned deps_ = 0;
    int arity_ = 0;
};

/// Unknown function of a chart, used to mint jet atoms.
struct JetFunction {
    std::string name;
    Chart chart;
    unsigned deps = 0b11;

    Sym operator()(MultiIndex index = {0, 0}) const { return Sym::jet(name, chart, index, deps); }
    bool admits(MultiIndex index) const;
};

/// Function symbol with derivative orders per argument, as it appears in an application.
/// Builtins (sin, cos, exp, log, sinh, cosh) carry no derivative orders.
struct FuncSym {
    std::string name;
    std::vector<int> deriv;

    int arity() const { return static_cast<int>(deriv.size()); }
    bool builtin() const { return is_builtin(name); }
    static bool is_builtin(std::string_view name);
    static FuncSym generic(std::string name, int arity) { return {std::move(name), std::vector<int>(arity, 0)}; }

    friend bool operator==(const FuncSym&, const FuncSym&) = default;
    friend auto operator<=>(const FuncSym&, const FuncSym&) = default;
};

}  // namespace ebeq

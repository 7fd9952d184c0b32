#include "ebeq/core/symbol.hpp"

#include "ebeq/core/rational.hpp"

#include <stdexcept>

namespace ebeq {

const Chart& target_chart()
{
    static const Chart chart{"y", "z"};
    return chart;
}

const Chart& source_chart()
{
    static const Chart chart{"t", "x"};
    return chart;
}

Sym Sym::indep(std::string name)
{
    Sym s;
    s.kind_ = SymKind::IndepVar;
    s.name_ = std::move(name);
    return s;
}

Sym Sym::param(std::string name)
{
    Sym s;
    s.kind_ = SymKind::Param;
    s.name_ = std::move(name);
    return s;
}

Sym Sym::jet(std::string func, Chart chart, MultiIndex index, unsigned deps)
{
    if (index[0] < 0 || index[1] < 0) throw std::invalid_argument("negative multi-index");
    for (int i = 0; i < 2; ++i) {
        if (index[i] > 0 && ((deps >> i) & 1U) == 0)
            throw std::invalid_argument("jet index in a direction the function does not depend on");
    }
    Sym s;
    s.kind_ = SymKind::Jet;
    s.name_ = std::move(func);
    s.chart_ = std::move(chart);
    s.index_ = index;
    s.deps_ = deps;
    return s;
}

Sym Sym::function(std::string name, int arity)
{
    Sym s;
    s.kind_ = SymKind::Function;
    s.name_ = std::move(name);
    s.arity_ = arity;
    return s;
}

Sym Sym::with_index(MultiIndex index) const
{
    return jet(name_, chart_, index, deps_);
}

bool Sym::same_function(const Sym& other) const
{
    return kind_ == SymKind::Jet && other.kind_ == SymKind::Jet && name_ == other.name_ &&
           chart_ == other.chart_ && deps_ == other.deps_;
}

std::string Sym::str() const
{
    if (kind_ != SymKind::Jet || (index_[0] == 0 && index_[1] == 0)) return name_;
    std::string s = name_ + "_";
    for (int i = 0; i < index_[0]; ++i) s += chart_.first;
    for (int i = 0; i < index_[1]; ++i) s += chart_.second;
    return s;
}

std::size_t Sym::hash() const
{
    std::size_t h = static_cast<std::size_t>(kind_);
    hash_combine(h, hash_string(name_));
    hash_combine(h, static_cast<std::size_t>(index_[0]));
    hash_combine(h, static_cast<std::size_t>(index_[1]));
    hash_combine(h, deps_);
    hash_combine(h, static_cast<std::size_t>(arity_));
    return h;
}

std::strong_ordering operator<=>(const Sym& a, const Sym& b)
{
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = order(a.index_) <=> order(b.index_); c != 0) return c;
    if (auto c = b.index_[0] <=> a.index_[0]; c != 0) return c;
    if (auto c = a.deps_ <=> b.deps_; c != 0) return c;
    if (auto c = a.chart_ <=> b.chart_; c != 0) return c;
    return a.arity_ <=> b.arity_;
}

bool JetFunction::admits(MultiIndex index) const
{
    for (int i = 0; i < 2; ++i) {
        if (index[i] < 0) return false;
        if (index[i] > 0 && ((deps >> i) & 1U) == 0) return false;
    }
    return true;
}

bool FuncSym::is_builtin(std::string_view name)
{
    return name == "sin" || name == "cos" || name == "exp" || name == "log" || name == "sinh" ||
           name == "cosh";
}

}  // namespace ebeq

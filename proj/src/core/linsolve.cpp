#include "ebeq/core/linsolve.hpp"

#include "ebeq/core/errors.hpp"

#include <map>

namespace ebeq {

using canon::Form;
using canon::Gen;
using canon::GenKind;

bool is_parameter_gen(const Gen& g)
{
    switch (g->kind) {
    case GenKind::Root:
        return true;
    case GenKind::Symbol:
        return g->sym.kind() == SymKind::Param;
    case GenKind::Factor:
        return !canon::any_gen(Form{g->poly, {}}, [](const Gen& h) { return !is_parameter_gen(h); });
    case GenKind::Apply:
        return false;
    }
    return false;
}

namespace {

struct MonoLess {
    bool operator()(const canon::Monomial& a, const canon::Monomial& b) const { return canon::compare(a, b) < 0; }
};

}  // namespace

LinearSystem linear_equations(const Form& e, const std::vector<Sym>& unknowns)
{
    auto unknown_index = [&](const Gen& g) -> int {
        if (g->kind != GenKind::Symbol) return -1;
        for (std::size_t i = 0; i < unknowns.size(); ++i) {
            if (unknowns[i] == g->sym) return static_cast<int>(i);
        }
        return -1;
    };
    // key monomial -> (per-unknown coefficient terms, constant terms)
    std::map<canon::Monomial, std::vector<std::vector<canon::LaurentTerm>>, MonoLess> groups;
    const std::size_t n = unknowns.size();
    for (const auto& t : e.num.terms) {
        canon::Monomial key;
        canon::Monomial coeff_mono;
        int which = -1;
        for (const auto& f : t.mono) {
            const int u = unknown_index(f.gen);
            if (u >= 0) {
                if (which >= 0 || f.exp != Frac(1)) throw Error("expression is not linear in the unknowns");
                which = u;
            } else if (is_parameter_gen(f.gen)) {
                coeff_mono.push_back(f);
            } else {
                key.push_back(f);
            }
        }
        auto& slot = groups[key];
        if (slot.empty()) slot.resize(n + 1);
        slot[which < 0 ? n : static_cast<std::size_t>(which)].push_back({t.coeff, coeff_mono});
    }
    LinearSystem sys;
    for (auto& [key, slot] : groups) {
        std::vector<Form> row;
        row.reserve(n);
        for (std::size_t i = 0; i < n; ++i) row.push_back(canon::canonicalize(std::move(slot[i])));
        sys.rows.push_back(std::move(row));
        sys.rhs.push_back(canon::neg(canon::canonicalize(std::move(slot[n]))));
    }
    return sys;
}

std::optional<std::vector<Form>> solve(const LinearSystem& sys, const std::vector<Sym>& unknowns,
                                       const AssumptionSet& as)
{
    (void)as;
    const std::size_t n = unknowns.size();
    std::vector<std::vector<Form>> a = sys.rows;
    std::vector<Form> b = sys.rhs;
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < a.size(); ++col) {
        std::size_t p = row;
        while (p < a.size() && a[p][col].is_zero()) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[row]);
        std::swap(b[p], b[row]);
        const Form inv = canon::inv(a[row][col]);
        for (std::size_t j = col; j < n; ++j) a[row][j] = canon::mul(a[row][j], inv);
        b[row] = canon::mul(b[row], inv);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            const Form factor = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] = canon::sub(a[r][j], canon::mul(factor, a[row][j]));
            b[r] = canon::sub(b[r], canon::mul(factor, b[row]));
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    for (std::size_t r = row; r < a.size(); ++r) {
        if (!b[r].is_zero()) return std::nullopt;
    }
    std::vector<Form> out(n);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    for (std::size_t j = 0; j < n; ++j) {
        if (!is_pivot[j]) out[j] = canon::from_sym(unknowns[j]);
    }
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
        Form v = b[r];
        for (std::size_t j = 0; j < n; ++j) {
            if (is_pivot[j] || a[r][j].is_zero()) continue;
            v = canon::sub(v, canon::mul(a[r][j], out[j]));
        }
        out[static_cast<std::size_t>(pivot_col[r])] = v;
    }
    return out;
}

}  // namespace ebeq

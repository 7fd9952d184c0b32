#include "ebeq/core/ops.hpp"

#include "ebeq/core/errors.hpp"

namespace ebeq {

using canon::Form;
using canon::Gen;
using canon::GenKind;

Expr normalize(const Expr& e, const AssumptionSet& as)
{
    if (e.canonical() != nullptr) return e;
    return Expr::from_form(to_form(e, as));
}

bool is_zero(const Expr& e, const AssumptionSet& as)
{
    return to_form(e, as).is_zero();
}

bool equivalent(const Expr& a, const Expr& b, const AssumptionSet& as)
{
    return canon::equal(to_form(a, as), to_form(b, as));
}

Expr total_derivative(const Expr& e, const std::string& dir, const AssumptionSet& as)
{
    canon::TotalDerivative d(dir);
    return Expr::from_form(d(to_form(e, as)));
}

Expr total_derivative(const Expr& e, const Chart& chart, MultiIndex k, const AssumptionSet& as)
{
    Form f = to_form(e, as);
    for (int pos = 0; pos < 2; ++pos) {
        canon::TotalDerivative d(chart.var(pos));
        for (int i = 0; i < k[pos]; ++i) f = d(f);
    }
    return Expr::from_form(f);
}

Expr partial_derivative(const Expr& e, const Sym& s, const AssumptionSet& as)
{
    canon::PartialDerivative d(s);
    return Expr::from_form(d(to_form(e, as)));
}

Bindings& Bindings::bind(const Sym& s, Expr value)
{
    if (s.kind() == SymKind::Function) throw Error("use bind_applied for function symbol " + s.name());
    atoms_[s] = std::move(value);
    return *this;
}

Bindings& Bindings::bind_function(const JetFunction& fn, Expr value)
{
    for (auto& [f, v] : functions_) {
        if (f.name == fn.name && f.chart == fn.chart) {
            v = std::move(value);
            return *this;
        }
    }
    functions_.emplace_back(fn, std::move(value));
    return *this;
}

Bindings& Bindings::bind_applied(const std::string& name, std::vector<Sym> formals, Expr body)
{
    applied_[name] = Applied{std::move(formals), std::move(body)};
    return *this;
}

namespace {

class Substitution {
public:
    Substitution(const Bindings& b, const AssumptionSet& as) : b_(b), as_(as)
    {
        for (const auto& [fn, value] : b.functions()) {
            Slot slot;
            slot.fn = fn;
            slot.jets.emplace(MultiIndex{0, 0}, to_form(value, as));
            slots_.push_back(std::move(slot));
        }
        for (const auto& [s, value] : b.atoms()) atoms_.emplace(s, to_form(value, as));
        for (const auto& [s, value] : atoms_) {
            if (auto* slot = slot_of(s)) {
                if (!canon::equal(jet_value(*slot, s.index()), value))
                    throw InconsistentBinding("jet " + s.str() + " is bound apart from its function " + slot->fn.name);
            }
        }
        for (const auto& [name, app] : b.applied()) bodies_.emplace(name, to_form(app.body, as));
    }

    Form operator()(const Form& f)
    {
        canon::Rewriter rw(
            [this](const Sym& s) -> std::optional<Form> {
                auto it = atoms_.find(s);
                if (it != atoms_.end()) return it->second;
                if (auto* slot = slot_of(s)) return jet_value(*slot, s.index());
                return std::nullopt;
            },
            [this](const FuncSym& fn, const std::vector<Form>& args) -> std::optional<Form> {
                return applied(fn, args);
            },
            as_);
        return rw(f);
    }

private:
    struct Slot {
        JetFunction fn;
        std::map<MultiIndex, Form> jets;
    };

    Slot* slot_of(const Sym& s)
    {
        if (!s.is_jet()) return nullptr;
        for (auto& slot : slots_) {
            if (slot.fn.name == s.name() && slot.fn.chart == s.chart()) return &slot;
        }
        return nullptr;
    }

    const Form& jet_value(Slot& slot, MultiIndex k)
    {
        auto it = slot.jets.find(k);
        if (it != slot.jets.end()) return it->second;
        const int pos = k[0] > 0 ? 0 : 1;
        MultiIndex lower = k;
        lower[pos] -= 1;
        const Form below = jet_value(slot, lower);
        canon::TotalDerivative d(slot.fn.chart.var(pos));
        return slot.jets.emplace(k, d(below)).first->second;
    }

    std::optional<Form> applied(const FuncSym& fn, const std::vector<Form>& args)
    {
        auto it = b_.applied().find(fn.name);
        if (it == b_.applied().end()) return std::nullopt;
        const auto& formals = it->second.formals;
        if (formals.size() != args.size())
            throw Error("function " + fn.name + " bound with " + std::to_string(formals.size()) +
                        " arguments but applied to " + std::to_string(args.size()));
        Form body = bodies_.at(fn.name);
        for (std::size_t i = 0; i < formals.size() && i < fn.deriv.size(); ++i) {
            canon::PartialDerivative d(formals[i]);
            for (int k = 0; k < fn.deriv[i]; ++k) body = d(body);
        }
        canon::Rewriter inner(
            [&](const Sym& s) -> std::optional<Form> {
                for (std::size_t i = 0; i < formals.size(); ++i) {
                    if (formals[i] == s) return args[i];
                }
                return std::nullopt;
            },
            nullptr, as_);
        return inner(body);
    }

    const Bindings& b_;
    const AssumptionSet& as_;
    std::map<Sym, Form> atoms_;
    std::vector<Slot> slots_;
    std::map<std::string, Form> bodies_;
};

bool is_family_jet(const Gen& g, const JetFunction& family)
{
    return g->kind == GenKind::Symbol && g->sym.is_jet() && g->sym.name() == family.name &&
           g->sym.chart() == family.chart;
}

template <class IsFamily>
void check_polynomial(const Form& f, const IsFamily& is_family, const std::string& name)
{
    auto nested = [&](const Gen& g) {
        if (g->kind == GenKind::Factor) return canon::any_gen(Form{g->poly, {}}, is_family);
        if (g->kind == GenKind::Apply) {
            for (const auto& a : g->args) {
                if (canon::any_gen(a, is_family)) return true;
            }
        }
        return false;
    };
    for (const auto& d : f.den) {
        if (is_family(d.gen) || nested(d.gen)) throw NotPolynomial(name + " occurs in a denominator");
    }
    for (const auto& t : f.num.terms) {
        for (const auto& x : t.mono) {
            if (nested(x.gen)) throw NotPolynomial(name + " occurs inside a radical or a function argument");
        }
    }
}

template <class Key, class IsFamily, class KeyOf, class Map>
Expr split_linear(const Form& f, const IsFamily& is_family, const KeyOf& key_of, Map& out, const std::string& name)
{
    check_polynomial(f, is_family, name);
    std::map<Key, std::vector<canon::LaurentTerm>> groups;
    std::vector<canon::LaurentTerm> rest;
    const canon::Monomial den_inv = canon::mono_pow(f.den, Frac(-1));
    for (const auto& t : f.num.terms) {
        canon::Monomial others;
        const canon::Factor* hit = nullptr;
        for (const auto& x : t.mono) {
            if (is_family(x.gen)) {
                if (hit != nullptr || x.exp != Frac(1)) throw NotPolynomial(name + " occurs nonlinearly");
                hit = &x;
            } else {
                others.push_back(x);
            }
        }
        canon::LaurentTerm lt{t.coeff, canon::mono_mul(others, den_inv)};
        if (hit == nullptr) rest.push_back(std::move(lt));
        else groups[key_of(hit->gen)].push_back(std::move(lt));
    }
    for (auto& [k, terms] : groups) {
        Form c = canon::canonicalize(std::move(terms));
        if (!c.is_zero()) out.emplace(k, Expr::from_form(c));
    }
    return Expr::from_form(canon::canonicalize(std::move(rest)));
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& b, const AssumptionSet& as)
{
    Substitution s(b, as);
    return Expr::from_form(s(to_form(e, as)));
}

JetCollection collect(const Expr& e, const JetFunction& family, const AssumptionSet& as)
{
    JetCollection out;
    auto is_family = [&](const Gen& g) { return is_family_jet(g, family); };
    auto key_of = [](const Gen& g) { return g->sym.index(); };
    out.rest = split_linear<MultiIndex>(to_form(e, as), is_family, key_of, out.coeffs, "jets of " + family.name);
    return out;
}

ApplyCollection collect_applications(const Expr& e, const std::string& name, const AssumptionSet& as)
{
    ApplyCollection out;
    auto is_family = [&](const Gen& g) { return g->kind == GenKind::Apply && g->fn.name == name; };
    auto key_of = [](const Gen& g) { return g->fn.deriv; };
    out.rest = split_linear<std::vector<int>>(to_form(e, as), is_family, key_of, out.coeffs, "applications of " + name);
    return out;
}

bool depends_on(const Expr& e, const std::string& name)
{
    return canon::any_gen(to_form(e), [&](const Gen& g) {
        return (g->kind == GenKind::Symbol && g->sym.is_jet() && g->sym.name() == name) ||
               (g->kind == GenKind::Apply && g->fn.name == name);
    });
}

bool contains(const Expr& e, const Sym& s)
{
    return canon::any_gen(to_form(e), [&](const Gen& g) { return g->kind == GenKind::Symbol && g->sym == s; });
}

double evaluate(const Expr& e, const canon::SymbolValues& values, const canon::FunctionValues& functions)
{
    return canon::evaluate(to_form(e), values, functions);
}

}  // namespace ebeq

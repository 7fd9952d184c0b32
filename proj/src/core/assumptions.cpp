#include "ebeq/core/assumptions.hpp"

#include "ebeq/core/errors.hpp"

#include <stdexcept>

namespace ebeq {

using canon::Form;
using canon::Gen;
using canon::GenKind;
using canon::Poly;

AssumptionSet AssumptionSet::strict()
{
    AssumptionSet s;
    s.radicands_positive_ = false;
    return s;
}

Poly AssumptionSet::key_of(const Gen& g)
{
    if (g->kind == GenKind::Factor) return g->poly;
    return Poly{{canon::Term{{canon::Factor{g, Frac(1)}}, Q(1)}}};
}

bool AssumptionSet::matches(const std::vector<Poly>& table, const Poly& p, bool up_to_sign)
{
    for (const auto& q : table) {
        if (canon::compare(q, p) == 0) return true;
        if (up_to_sign && q.size() == p.size()) {
            bool opposite = true;
            for (std::size_t i = 0; i < q.size() && opposite; ++i) {
                opposite = canon::compare(q.terms[i].mono, p.terms[i].mono) == 0 &&
                           q.terms[i].coeff == -p.terms[i].coeff;
            }
            if (opposite) return true;
        }
    }
    return false;
}

void AssumptionSet::assume_positive(const Form& e)
{
    if (e.is_zero()) throw std::invalid_argument("zero cannot be assumed positive");
    if (!e.den.empty()) throw std::invalid_argument("positivity assumptions take a single generator");
    Q c;
    canon::Monomial m;
    Poly prim;
    if (e.num.size() == 1) {
        c = e.num.terms[0].coeff;
        m = e.num.terms[0].mono;
    } else {
        auto [cc, mm, pp] = canon::split_content(e.num);
        c = cc;
        m = std::move(mm);
        prim = std::move(pp);
    }
    const std::size_t gens = m.size() + (prim.empty() ? 0 : 1);
    if (c <= 0 || gens != 1) throw std::invalid_argument("positivity assumptions take c * g^r with c > 0");
    const Poly key = prim.empty() ? key_of(m.front().gen) : prim;
    if (!prim.empty() || m.front().gen->kind != GenKind::Apply) {
        positive_.push_back(key);
        nonzero_.push_back(key);
    } else {
        positive_functions_.insert(m.front().gen->fn.name);
    }
}

void AssumptionSet::assume_nonzero(const Form& e)
{
    if (e.is_zero()) throw std::invalid_argument("zero cannot be assumed nonzero");
    auto add = [&](const Gen& g) {
        if (g->kind != GenKind::Root) nonzero_.push_back(key_of(g));
    };
    for (const auto& f : e.den) add(f.gen);
    if (e.num.size() == 1) {
        for (const auto& f : e.num.terms[0].mono) add(f.gen);
        return;
    }
    auto [c, m, prim] = canon::split_content(e.num);
    for (const auto& f : m) add(f.gen);
    nonzero_.push_back(std::move(prim));
}

void AssumptionSet::assume_positive_function(const std::string& name)
{
    positive_functions_.insert(name);
}

bool AssumptionSet::is_positive(const Gen& g) const
{
    switch (g->kind) {
    case GenKind::Root:
        return true;
    case GenKind::Apply: {
        if (positive_functions_.count(g->fn.name) == 0) return false;
        for (int d : g->fn.deriv) {
            if (d != 0) return false;
        }
        return true;
    }
    default:
        return matches(positive_, key_of(g), false);
    }
}

bool AssumptionSet::is_nonzero(const Gen& g) const
{
    if (is_positive(g)) return true;
    if (g->kind == GenKind::Apply) return false;
    return matches(nonzero_, key_of(g), true);
}

bool AssumptionSet::is_nonzero(const Form& e) const
{
    if (e.is_zero()) return false;
    auto known = [&](const canon::Factor& f) {
        if (!f.exp.is_integer() && radicands_positive_) return true;
        return is_nonzero(f.gen);
    };
    // Multi-term numerators are split over the known polynomial factors first.
    for (const auto& f : canon::factor_known(e.num).second) {
        if (!known(f)) return false;
    }
    for (const auto& f : e.den) {
        if (!known(f)) return false;
    }
    return true;
}

void AssumptionSet::require_positive(const Gen& g) const
{
    if (radicands_positive_ || is_positive(g)) return;
    std::string what = "a polynomial radicand";
    if (g->kind == GenKind::Symbol) what = g->sym.str();
    if (g->kind == GenKind::Apply) what = "an application of " + g->fn.name;
    throw AssumptionMissing("radical rewrite needs " + what + " > 0");
}

}  // namespace ebeq

#include "ebeq/core/canon.hpp"

#include "ebeq/core/assumptions.hpp"
#include "ebeq/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

namespace ebeq::canon {

namespace {

int sign_of(int c)
{
    return (c > 0) - (c < 0);
}

Q q_of(Frac f)
{
    Q q(f.num(), f.den());
    q.canonicalize();
    return q;
}

Frac degree(const Monomial& m)
{
    Frac d;
    for (const auto& f : m) d += f.exp;
    return d;
}

// Lexicographic part of the monomial order; the smallest generator is the most significant.
int compare_lex(const Monomial& a, const Monomial& b)
{
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const int c = compare(a[i].gen, b[j].gen);
        if (c == 0) {
            if (a[i].exp != b[j].exp) return a[i].exp < b[j].exp ? -1 : 1;
            ++i;
            ++j;
        } else {
            return c < 0 ? 1 : -1;
        }
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return 0;
}

bool mono_equal(const Monomial& a, const Monomial& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].exp != b[i].exp) return false;
        if (a[i].gen.get() != b[i].gen.get() && compare(a[i].gen, b[i].gen) != 0) return false;
    }
    return true;
}

struct MonoHash {
    std::size_t operator()(const Monomial& m) const { return hash_value(m); }
};
struct MonoEq {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_equal(a, b); }
};

// Descending monomial order, for ordered containers.
struct MonoGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};

std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b)
{
    Monomial out = mono_mul(a, mono_pow(b, Frac(-1)));
    for (const auto& f : out) {
        if (f.exp < Frac(0)) return std::nullopt;
    }
    return out;
}

// Combine like terms and sort descending.
Poly combine(std::vector<Term>&& raw)
{
    std::unordered_map<Monomial, std::size_t, MonoHash, MonoEq> index;
    index.reserve(raw.size() * 2);
    std::vector<Term> uniq;
    uniq.reserve(raw.size());
    for (auto& t : raw) {
        auto [it, inserted] = index.try_emplace(t.mono, uniq.size());
        if (inserted) {
            uniq.push_back(std::move(t));
        } else {
            uniq[it->second].coeff += t.coeff;
        }
    }
    std::vector<std::pair<Frac, std::size_t>> keys;
    keys.reserve(uniq.size());
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        if (uniq[i].coeff != 0) keys.emplace_back(degree(uniq[i].mono), i);
    }
    std::sort(keys.begin(), keys.end(), [&](const auto& l, const auto& r) {
        if (l.first != r.first) return l.first > r.first;
        return compare_lex(uniq[l.second].mono, uniq[r.second].mono) > 0;
    });
    Poly p;
    p.terms.reserve(keys.size());
    for (const auto& k : keys) p.terms.push_back(std::move(uniq[k.second]));
    return p;
}

void factor_integer(mpz_class n, std::map<mpz_class, long>& out, long mult)
{
    if (n <= 1) return;
    for (unsigned long p = 2; p < 100000 && mpz_class(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            out[mpz_class(p)] += mult;
        }
    }
    if (n <= 1) return;
    for (unsigned long k = 62; k >= 2; --k) {
        mpz_class r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            out[r] += mult * static_cast<long>(k);
            return;
        }
    }
    out[n] += mult;
}

// c^r for rational c > 0: rational part and a monomial of integer roots.
std::pair<Q, Monomial> root_power(const Q& c, Frac r)
{
    std::map<mpz_class, long> factors;
    factor_integer(c.get_num(), factors, 1);
    factor_integer(c.get_den(), factors, -1);
    Q rational(1);
    Monomial roots;
    for (const auto& [p, k] : factors) {
        if (k == 0) continue;
        const Frac e = Frac(k) * r;
        const std::int64_t i = e.floor();
        rational *= pow_int(Q(p), i);
        const Frac f = e - Frac(i);
        if (!f.is_zero()) roots = mono_mul(roots, Monomial{{make_root(p), f}});
    }
    return {rational, roots};
}

// Expansion of numerator monomials whose factor or root exponents reached 1.
class Expander {
public:
    void expand(Q coeff, Monomial mono, std::vector<Term>& out)
    {
        for (std::size_t k = 0; k < mono.size(); ++k) {
            const auto& f = mono[k];
            if (f.gen->kind == GenKind::Root && f.exp >= Frac(1)) {
                const std::int64_t i = f.exp.floor();
                coeff *= pow_int(Q(f.gen->root), i);
                mono[k].exp = f.exp - Frac(i);
                if (mono[k].exp.is_zero()) mono.erase(mono.begin() + static_cast<long>(k));
                expand(std::move(coeff), std::move(mono), out);
                return;
            }
            if (f.gen->kind == GenKind::Factor && f.exp >= Frac(1)) {
                const std::int64_t n = f.exp.floor();
                const Gen g = f.gen;
                mono[k].exp = f.exp - Frac(n);
                if (mono[k].exp.is_zero()) mono.erase(mono.begin() + static_cast<long>(k));
                const Poly& pn = power(g, n);
                for (const auto& s : pn.terms) expand(coeff * s.coeff, mono_mul(mono, s.mono), out);
                return;
            }
        }
        out.push_back(Term{std::move(mono), std::move(coeff)});
    }

private:
    const Poly& power(const Gen& g, std::int64_t n)
    {
        auto& slot = cache_[g.get()];
        slot.first = g;
        auto it = slot.second.find(n);
        if (it != slot.second.end()) return it->second;
        Form base{g->poly, {}};
        Form acc = constant(Q(1));
        for (std::int64_t i = 0; i < n; ++i) acc = mul(acc, base);
        return slot.second.emplace(n, std::move(acc.num)).first->second;
    }

    std::unordered_map<const GenNode*, std::pair<Gen, std::map<std::int64_t, Poly>>> cache_;
};

bool divides_mono(const Monomial& a, const Monomial& b)
{
    // true when b divides a
    return mono_div(a, b).has_value();
}

void reduce(Form& f)
{
    if (f.num.empty()) {
        f.den.clear();
        return;
    }
    for (auto& d : f.den) {
        if (d.gen->kind != GenKind::Factor) continue;
        while (d.exp > Frac(0)) {
            auto q = divide(f.num, d.gen->poly);
            if (!q) break;
            f.num = std::move(*q);
            d.exp = d.exp - Frac(1);
        }
    }
    for (auto& d : f.den) {
        if (d.gen->kind == GenKind::Factor || d.exp.is_zero()) continue;
        std::int64_t common = d.exp.floor();
        for (const auto& t : f.num.terms) {
            std::int64_t have = 0;
            for (const auto& x : t.mono) {
                if (x.gen.get() == d.gen.get() || compare(x.gen, d.gen) == 0) {
                    have = x.exp.floor();
                    break;
                }
            }
            common = std::min(common, have);
            if (common == 0) break;
        }
        if (common <= 0) continue;
        const Monomial shift{{d.gen, Frac(-common)}};
        for (auto& t : f.num.terms) t.mono = mono_mul(t.mono, shift);
        d.exp = d.exp - Frac(common);
    }
    std::erase_if(f.den, [](const Factor& x) { return x.exp.is_zero(); });
}

std::vector<LaurentTerm> laurent_terms(const Form& f)
{
    std::vector<LaurentTerm> out;
    out.reserve(f.num.size());
    const Monomial den_inv = mono_pow(f.den, Frac(-1));
    for (const auto& t : f.num.terms) out.push_back({t.coeff, mono_mul(t.mono, den_inv)});
    return out;
}

Poly negate(Poly p)
{
    for (auto& t : p.terms) t.coeff = -t.coeff;
    return p;
}

Poly merge_add(const Poly& a, const Poly& b)
{
    Poly out;
    out.terms.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
            out.terms.push_back(a.terms[i++]);
            continue;
        }
        if (i == a.size()) {
            out.terms.push_back(b.terms[j++]);
            continue;
        }
        const int c = compare(a.terms[i].mono, b.terms[j].mono);
        if (c > 0) {
            out.terms.push_back(a.terms[i++]);
        } else if (c < 0) {
            out.terms.push_back(b.terms[j++]);
        } else {
            Q s = a.terms[i].coeff + b.terms[j].coeff;
            if (s != 0) out.terms.push_back(Term{a.terms[i].mono, std::move(s)});
            ++i;
            ++j;
        }
    }
    return out;
}

bool mono_same(const Monomial& a, const Monomial& b)
{
    return mono_equal(a, b);
}

// Factor generators are kept free of known factors and of perfect powers, so that
// (1 + k z)^7 multiplied out and inverted comes back as (1 + k z)^-7.
std::mutex registry_mutex;
std::vector<Gen>& registry()
{
    static std::vector<Gen> gens;
    return gens;
}

bool is_constant_poly(const Poly& p)
{
    return p.size() == 1 && p.terms.front().mono.empty();
}

Poly poly_power(const Poly& p, int n)
{
    Form acc = constant(Q(1));
    const Form base{p, {}};
    for (int i = 0; i < n; ++i) acc = mul(acc, base);
    return acc.num;
}

std::optional<Q> rational_root(const Q& q, int n)
{
    if (q < 0 && n % 2 == 0) return std::nullopt;
    mpz_class a = abs(q.get_num());
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(n)) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n)) == 0) return std::nullopt;
    Q r(rn, rd);
    r.canonicalize();
    return q < 0 ? Q(-r) : r;
}

std::optional<Poly> nth_root(const Poly& p, int n)
{
    const Term& lt = p.terms.front();
    auto c = rational_root(lt.coeff, n);
    if (!c) return std::nullopt;
    if (!rational_root(p.terms.back().coeff, n)) return std::nullopt;
    const Frac inv_n(1, n);
    std::vector<Term> root{Term{mono_pow(lt.mono, inv_n), *c}};
    const Frac back_deg = degree(p.terms.back().mono) * inv_n;
    for (std::size_t guard = 0; guard <= p.size() + 1; ++guard) {
        Poly current{root};
        Form diff = sub(Form{p, {}}, Form{poly_power(current, n), {}});
        if (diff.is_zero()) return current;
        if (!diff.den.empty()) return std::nullopt;
        const Term& top = diff.num.terms.front();
        Monomial lead_pow = mono_pow(root.front().mono, Frac(n - 1));
        auto m = mono_div(top.mono, lead_pow);
        if (!m) return std::nullopt;
        if (compare(*m, root.back().mono) >= 0) return std::nullopt;
        if (degree(*m) < back_deg) return std::nullopt;
        const Q coeff = top.coeff / (Q(n) * pow_int(root.front().coeff, n - 1));
        root.push_back(Term{std::move(*m), coeff});
    }
    return std::nullopt;
}

Gen intern_factor(Poly p)
{
    std::lock_guard<std::mutex> lock(registry_mutex);
    for (const auto& g : registry()) {
        if (compare(g->poly, p) == 0) return g;
    }
    Gen g = make_factor(std::move(p));
    registry().push_back(g);
    return g;
}

struct Decomposition {
    Q unit{1};
    std::vector<std::pair<Gen, std::int64_t>> parts;
};

// p = A s + B with s of degree one in p: the primitive part of A or B may divide p.
std::optional<std::pair<Poly, Poly>> split_linear(const Poly& p)
{
    std::vector<Gen> gens;
    for (const auto& t : p.terms) {
        for (const auto& f : t.mono) {
            if (f.gen->kind == GenKind::Root) continue;
            if (std::find(gens.begin(), gens.end(), f.gen) == gens.end()) gens.push_back(f.gen);
        }
    }
    for (const auto& g : gens) {
        std::vector<LaurentTerm> with, without;
        bool linear = true;
        for (const auto& t : p.terms) {
            auto it = std::find_if(t.mono.begin(), t.mono.end(), [&](const Factor& f) { return f.gen == g; });
            if (it == t.mono.end()) {
                without.push_back({t.coeff, t.mono});
            } else if (it->exp == Frac(1)) {
                Monomial rest = t.mono;
                rest.erase(rest.begin() + (it - t.mono.begin()));
                with.push_back({t.coeff, std::move(rest)});
            } else {
                linear = false;
                break;
            }
        }
        if (!linear || with.empty() || without.empty()) continue;
        for (auto* side : {&with, &without}) {
            const Form f = canonicalize(*side);
            if (!f.den.empty()) continue;
            auto [c, m, prim] = split_content(f.num);
            if (is_constant_poly(prim) || prim.size() >= p.size()) continue;
            if (auto q = divide(p, prim); q && !is_constant_poly(*q)) return std::make_pair(std::move(prim), std::move(*q));
        }
    }
    return std::nullopt;
}

Decomposition decompose(Poly p)
{
    Decomposition out;
    std::vector<Gen> known;
    {
        std::lock_guard<std::mutex> lock(registry_mutex);
        known = registry();
    }
    // Smallest first, so a product registered earlier does not shadow its factors.
    std::stable_sort(known.begin(), known.end(), [](const Gen& a, const Gen& b) { return a->poly.size() < b->poly.size(); });
    for (const auto& g : known) {
        if (is_constant_poly(p)) break;
        if (g->poly.size() > p.size()) continue;
        std::int64_t k = 0;
        while (!is_constant_poly(p)) {
            auto q = divide(p, g->poly);
            if (!q) break;
            p = std::move(*q);
            ++k;
        }
        if (k > 0) out.parts.emplace_back(g, k);
    }
    if (is_constant_poly(p)) {
        out.unit = p.terms.front().coeff;
        return out;
    }
    if (auto split = split_linear(p)) {
        for (Poly* piece : {&split->first, &split->second}) {
            auto [c, m, prim] = split_content(*piece);
            Decomposition d = decompose(std::move(prim));
            out.unit *= c * d.unit;
            for (auto& part : d.parts) {
                auto same = std::find_if(out.parts.begin(), out.parts.end(), [&](const auto& e) { return e.first == part.first; });
                if (same != out.parts.end()) same->second += part.second;
                else out.parts.push_back(part);
            }
        }
        return out;
    }
    if (p.terms.front().coeff < 0) {
        out.unit = -1;
        p = negate(std::move(p));
    }
    std::int64_t mult = 1;
    const Frac lead = degree(p.terms.front().mono);
    const std::int64_t top = std::min<std::int64_t>(lead.floor(), 64);
    for (std::int64_t n = top; n >= 2; --n) {
        if (auto r = nth_root(p, static_cast<int>(n))) {
            p = std::move(*r);
            mult = n;
            break;
        }
    }
    out.parts.emplace_back(intern_factor(std::move(p)), mult);
    return out;
}

void require_positive(const Gen& g, const AssumptionSet& as)
{
    if (g->kind == GenKind::Root) return;
    as.require_positive(g);
}

// g^e for a generator, resolving perfect squares of factor polynomials.
Form gen_power(const Gen& g, Frac e, const AssumptionSet& as)
{
    if (!e.is_integer() && g->kind == GenKind::Factor && e.den() % 2 == 0) {
        if (auto root = square_root(g->poly)) return pow(Form{std::move(*root), {}}, e * Frac(2), as);
    }
    if (!e.is_integer()) require_positive(g, as);
    return from_gen(g, e);
}

}  // namespace

// -- ordering -----------------------------------------------------------------

int compare(const Gen& a, const Gen& b)
{
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
    case GenKind::Root:
        return sign_of(cmp(a->root, b->root));
    case GenKind::Symbol: {
        const auto c = a->sym <=> b->sym;
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case GenKind::Apply: {
        if (a->fn.name != b->fn.name) return a->fn.name < b->fn.name ? -1 : 1;
        if (a->fn.deriv != b->fn.deriv) return a->fn.deriv < b->fn.deriv ? -1 : 1;
        if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
        if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
        for (std::size_t i = 0; i < a->args.size(); ++i) {
            if (const int c = compare(a->args[i], b->args[i]); c != 0) return c;
        }
        return 0;
    }
    case GenKind::Factor:
        if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
        return compare(a->poly, b->poly);
    }
    return 0;
}

int compare(const Monomial& a, const Monomial& b)
{
    const Frac da = degree(a);
    const Frac db = degree(b);
    if (da != db) return da < db ? -1 : 1;
    return compare_lex(a, b);
}

int compare(const Poly& a, const Poly& b)
{
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (const int c = compare(a.terms[i].mono, b.terms[i].mono); c != 0) return c;
        if (const int c = cmp(a.terms[i].coeff, b.terms[i].coeff); c != 0) return sign_of(c);
    }
    return 0;
}

int compare(const Form& a, const Form& b)
{
    if (const int c = compare(a.num, b.num); c != 0) return c;
    if (a.den.size() != b.den.size()) return a.den.size() < b.den.size() ? -1 : 1;
    return compare_lex(a.den, b.den);
}

std::size_t hash_value(const Monomial& m)
{
    std::size_t h = 0x51ed27;
    for (const auto& f : m) {
        hash_combine(h, f.gen->hash);
        hash_combine(h, ebeq::hash_value(f.exp));
    }
    return h;
}

std::size_t hash_value(const Poly& p)
{
    std::size_t h = p.size();
    for (const auto& t : p.terms) {
        hash_combine(h, hash_value(t.mono));
        hash_combine(h, ebeq::hash_value(t.coeff));
    }
    return h;
}

std::size_t hash_value(const Form& f)
{
    std::size_t h = hash_value(f.num);
    hash_combine(h, hash_value(f.den));
    return h;
}

// -- generators -----------------------------------------------------------------

Gen make_root(const mpz_class& base)
{
    auto n = std::make_shared<GenNode>();
    n->kind = GenKind::Root;
    n->root = base;
    n->hash = ebeq::hash_value(base);
    hash_combine(n->hash, 11);
    return n;
}

Gen make_factor(Poly primitive)
{
    auto n = std::make_shared<GenNode>();
    n->kind = GenKind::Factor;
    n->hash = hash_value(primitive);
    hash_combine(n->hash, 13);
    n->poly = std::move(primitive);
    return n;
}

Gen make_symbol(const Sym& sym)
{
    auto n = std::make_shared<GenNode>();
    n->kind = GenKind::Symbol;
    n->sym = sym;
    n->hash = sym.hash();
    hash_combine(n->hash, 17);
    return n;
}

Gen make_apply(FuncSym fn, std::vector<Form> args)
{
    auto n = std::make_shared<GenNode>();
    n->kind = GenKind::Apply;
    n->hash = hash_string(fn.name);
    for (int d : fn.deriv) hash_combine(n->hash, static_cast<std::size_t>(d));
    for (const auto& a : args) hash_combine(n->hash, hash_value(a));
    n->fn = std::move(fn);
    n->args = std::move(args);
    return n;
}

// -- construction -----------------------------------------------------------------

Form zero()
{
    return Form{};
}

Form constant(const Q& q)
{
    Form f;
    if (q != 0) f.num.terms.push_back(Term{{}, q});
    return f;
}

Form from_gen(const Gen& g, Frac exp)
{
    return canonicalize({LaurentTerm{Q(1), Monomial{{g, exp}}}});
}

Form from_sym(const Sym& s)
{
    return from_gen(make_symbol(s));
}

std::optional<Q> constant_value(const Form& f)
{
    if (f.num.empty()) return Q(0);
    if (f.num.size() == 1 && f.num.terms[0].mono.empty() && f.den.empty()) return f.num.terms[0].coeff;
    return std::nullopt;
}

Monomial mono_mul(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
            out.push_back(a[i++]);
            continue;
        }
        if (i == a.size()) {
            out.push_back(b[j++]);
            continue;
        }
        const int c = compare(a[i].gen, b[j].gen);
        if (c < 0) {
            out.push_back(a[i++]);
        } else if (c > 0) {
            out.push_back(b[j++]);
        } else {
            const Frac e = a[i].exp + b[j].exp;
            if (!e.is_zero()) out.push_back(Factor{a[i].gen, e});
            ++i;
            ++j;
        }
    }
    return out;
}

Monomial mono_pow(const Monomial& a, Frac r)
{
    Monomial out;
    if (r.is_zero()) return out;
    out.reserve(a.size());
    for (const auto& f : a) out.push_back(Factor{f.gen, f.exp * r});
    return out;
}

Form canonicalize(std::vector<LaurentTerm> terms)
{
    std::map<Gen, std::int64_t, GenLess> need;
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        Monomial kept;
        kept.reserve(t.mono.size());
        for (auto& f : t.mono) {
            if (f.gen->kind == GenKind::Root) {
                const std::int64_t i = f.exp.floor();
                if (i != 0) t.coeff *= pow_int(Q(f.gen->root), i);
                const Frac fr = f.exp - Frac(i);
                if (!fr.is_zero()) kept.push_back(Factor{f.gen, fr});
                continue;
            }
            const std::int64_t i = f.exp.floor();
            if (i < 0) {
                auto& n = need[f.gen];
                n = std::max(n, -i);
            }
            kept.push_back(f);
        }
        t.mono = std::move(kept);
    }

    Monomial den;
    for (const auto& [g, n] : need) den.push_back(Factor{g, Frac(n)});

    Expander expander;
    std::vector<Term> raw;
    raw.reserve(terms.size());
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        expander.expand(std::move(t.coeff), mono_mul(t.mono, den), raw);
    }

    Form f{combine(std::move(raw)), std::move(den)};
    reduce(f);
    return f;
}

std::tuple<Q, Monomial, Poly> split_content(const Poly& p)
{
    Monomial common = p.terms.front().mono;
    for (const auto& t : p.terms) {
        Monomial next;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < common.size() && j < t.mono.size()) {
            const int c = compare(common[i].gen, t.mono[j].gen);
            if (c == 0) {
                next.push_back(Factor{common[i].gen, std::min(common[i].exp, t.mono[j].exp)});
                ++i;
                ++j;
            } else if (c < 0) {
                ++i;
            } else {
                ++j;
            }
        }
        common = std::move(next);
        if (common.empty()) break;
    }
    mpz_class g = 0;
    mpz_class l = 1;
    for (const auto& t : p.terms) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
    }
    Q c(g, l);
    c.canonicalize();
    if (p.terms.front().coeff < 0) c = -c;
    Poly prim;
    prim.terms.reserve(p.size());
    const Monomial inv = mono_pow(common, Frac(-1));
    for (const auto& t : p.terms) prim.terms.push_back(Term{mono_mul(t.mono, inv), t.coeff / c});
    return {c, common, prim};
}

std::optional<Poly> divide(const Poly& p, const Poly& d)
{
    if (d.empty()) throw DomainError("polynomial division by zero");
    if (p.empty()) return Poly{};
    if (!divides_mono(p.terms.front().mono, d.terms.front().mono)) return std::nullopt;
    if (!divides_mono(p.terms.back().mono, d.terms.back().mono)) return std::nullopt;
    if (d.size() > p.size()) return std::nullopt;

    std::map<Monomial, Q, MonoGreater> rem;
    for (const auto& t : p.terms) rem.emplace(t.mono, t.coeff);
    std::vector<LaurentTerm> quotient;
    bool needs_canon = false;
    while (!rem.empty()) {
        auto lt = rem.begin();
        auto qm = mono_div(lt->first, d.terms.front().mono);
        if (!qm) return std::nullopt;
        const Q qc = lt->second / d.terms.front().coeff;
        for (const auto& s : d.terms) {
            Monomial m = mono_mul(*qm, s.mono);
            auto it = rem.find(m);
            if (it == rem.end()) {
                rem.emplace(std::move(m), -qc * s.coeff);
            } else {
                it->second -= qc * s.coeff;
                if (it->second == 0) rem.erase(it);
            }
        }
        for (const auto& f : *qm) {
            if (f.gen->kind != GenKind::Symbol && f.gen->kind != GenKind::Apply && f.exp >= Frac(1))
                needs_canon = true;
        }
        quotient.push_back(LaurentTerm{qc, std::move(*qm)});
        if (quotient.size() > 4 * p.size() + 16) return std::nullopt;
    }
    if (needs_canon) return canonicalize(std::move(quotient)).num;
    Poly out;
    out.terms.reserve(quotient.size());
    for (auto& t : quotient) out.terms.push_back(Term{std::move(t.mono), std::move(t.coeff)});
    return out;
}

std::optional<Poly> square_root(const Poly& p)
{
    if (p.empty()) return Poly{};
    const Term& lt = p.terms.front();
    if (lt.coeff <= 0) return std::nullopt;
    if (mpz_perfect_square_p(lt.coeff.get_num_mpz_t()) == 0 ||
        mpz_perfect_square_p(lt.coeff.get_den_mpz_t()) == 0)
        return std::nullopt;
    for (const auto& f : lt.mono) {
        if (!f.exp.is_integer() || f.exp.num() % 2 != 0) return std::nullopt;
    }
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), lt.coeff.get_num_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), lt.coeff.get_den_mpz_t());
    std::vector<Term> root{Term{mono_pow(lt.mono, Frac(1, 2)), Q(rn, rd)}};

    std::map<Monomial, Q, MonoGreater> rem;
    for (const auto& t : p.terms) rem.emplace(t.mono, t.coeff);
    auto subtract = [&](const Monomial& m, const Q& c) {
        auto it = rem.find(m);
        if (it == rem.end()) {
            rem.emplace(m, -c);
        } else {
            it->second -= c;
            if (it->second == 0) rem.erase(it);
        }
    };
    subtract(mono_mul(root[0].mono, root[0].mono), root[0].coeff * root[0].coeff);
    const Term lead = root[0];
    while (!rem.empty()) {
        if (root.size() > p.size() + 1) return std::nullopt;
        auto top = rem.begin();
        auto m = mono_div(top->first, lead.mono);
        if (!m) return std::nullopt;
        if (compare(*m, root.back().mono) >= 0) return std::nullopt;
        const Q c = top->second / (2 * lead.coeff);
        for (const auto& r : root) subtract(mono_mul(*m, r.mono), 2 * c * r.coeff);
        subtract(mono_mul(*m, *m), c * c);
        root.push_back(Term{std::move(*m), c});
    }
    return Poly{std::move(root)};
}

std::pair<Q, Monomial> factor_known(const Poly& p)
{
    if (p.size() == 1) return {p.terms.front().coeff, p.terms.front().mono};
    auto [c, m, prim] = split_content(p);
    Decomposition d = decompose(std::move(prim));
    Monomial out = m;
    for (const auto& [g, k] : d.parts) out = mono_mul(out, Monomial{{g, Frac(k)}});
    return {c * d.unit, out};
}

// -- arithmetic -------------------------------------------------------------------

Form neg(const Form& a)
{
    Form out = a;
    out.num = negate(std::move(out.num));
    return out;
}

Form add(const Form& a, const Form& b)
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den.size() == b.den.size() && mono_same(a.den, b.den)) {
        Form out{merge_add(a.num, b.num), a.den};
        reduce(out);
        return out;
    }
    auto terms = laurent_terms(a);
    auto more = laurent_terms(b);
    terms.insert(terms.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    return canonicalize(std::move(terms));
}

Form sub(const Form& a, const Form& b)
{
    return add(a, neg(b));
}

Form mul(const Form& a, const Form& b)
{
    if (a.is_zero() || b.is_zero()) return zero();
    if (auto c = constant_value(a)) {
        Form out = b;
        for (auto& t : out.num.terms) t.coeff *= *c;
        return out;
    }
    if (auto c = constant_value(b)) return mul(b, a);
    const Monomial den_inv = mono_pow(mono_mul(a.den, b.den), Frac(-1));
    std::vector<LaurentTerm> terms;
    terms.reserve(a.num.size() * b.num.size());
    for (const auto& ta : a.num.terms) {
        const Monomial left = mono_mul(ta.mono, den_inv);
        for (const auto& tb : b.num.terms) terms.push_back({ta.coeff * tb.coeff, mono_mul(left, tb.mono)});
    }
    return canonicalize(std::move(terms));
}

Form sum(const std::vector<Form>& parts)
{
    std::vector<LaurentTerm> terms;
    for (const auto& p : parts) {
        auto t = laurent_terms(p);
        terms.insert(terms.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
    return canonicalize(std::move(terms));
}

Form inv(const Form& a)
{
    if (a.is_zero()) throw DomainError("division by zero");
    if (a.num.size() == 1) {
        const Term& t = a.num.terms.front();
        return canonicalize({LaurentTerm{Q(1) / t.coeff, mono_mul(mono_pow(t.mono, Frac(-1)), a.den)}});
    }
    auto [c, m, prim] = split_content(a.num);
    const Decomposition d = decompose(std::move(prim));
    Monomial mono = mono_mul(mono_pow(m, Frac(-1)), a.den);
    for (const auto& [g, k] : d.parts) mono = mono_mul(mono, Monomial{{g, Frac(-k)}});
    return canonicalize({LaurentTerm{Q(1) / (c * d.unit), std::move(mono)}});
}

Form pow(const Form& a, Frac r, const AssumptionSet& as)
{
    if (r.is_zero()) return constant(Q(1));
    if (a.is_zero()) {
        if (r > Frac(0)) return zero();
        throw DomainError("zero raised to a negative power");
    }
    const bool single = a.num.size() == 1;
    if (r.is_integer()) {
        if (single) {
            const Term& t = a.num.terms.front();
            Monomial mono = mono_mul(mono_pow(t.mono, r), mono_pow(a.den, -r));
            return canonicalize({LaurentTerm{pow_int(t.coeff, r.num()), std::move(mono)}});
        }
        if (r < Frac(0)) return pow(inv(a), -r, as);
        Form result = constant(Q(1));
        Form base = a;
        std::int64_t n = r.num();
        while (n > 0) {
            if (n & 1) result = mul(result, base);
            n >>= 1;
            if (n > 0) base = mul(base, base);
        }
        return result;
    }

    Q c;
    Monomial m;
    std::optional<Poly> prim;
    if (single) {
        c = a.num.terms.front().coeff;
        m = a.num.terms.front().mono;
    } else {
        auto [cc, mm, pp] = split_content(a.num);
        c = cc;
        m = std::move(mm);
        prim = std::move(pp);
    }
    if (c < 0) {
        if (!prim) throw AssumptionMissing("negative constant factor under a radical");
        c = -c;
        prim = negate(std::move(*prim));
    }
    auto [rational, roots] = root_power(c, r);
    std::vector<Form> factors;
    factors.push_back(canonicalize({LaurentTerm{rational, roots}}));
    for (const auto& f : m) {
        require_positive(f.gen, as);
        factors.push_back(gen_power(f.gen, f.exp * r, as));
    }
    if (prim) {
        Form extra;
        bool done = false;
        if (r.den() % 2 == 0) {
            if (auto root = square_root(*prim)) {
                extra = pow(Form{std::move(*root), {}}, r * Frac(2), as);
                done = true;
            }
        }
        if (!done) {
            Decomposition d = decompose(*prim);
            if (d.unit != 1) d = Decomposition{Q(1), {{intern_factor(std::move(*prim)), 1}}};
            extra = constant(Q(1));
            for (const auto& [g, k] : d.parts) {
                require_positive(g, as);
                extra = mul(extra, gen_power(g, Frac(k) * r, as));
            }
        }
        factors.push_back(std::move(extra));
    }
    for (const auto& f : a.den) {
        require_positive(f.gen, as);
        factors.push_back(gen_power(f.gen, -(f.exp * r), as));
    }
    Form out = constant(Q(1));
    for (const auto& f : factors) out = mul(out, f);
    return out;
}

// -- traversal ------------------------------------------------------------------------

void visit(const Form& f, const std::function<bool(const Gen&)>& visitor)
{
    auto on_gen = [&](const Gen& g) {
        if (!visitor(g)) return;
        if (g->kind == GenKind::Factor) visit(Form{g->poly, {}}, visitor);
        if (g->kind == GenKind::Apply) {
            for (const auto& a : g->args) visit(a, visitor);
        }
    };
    for (const auto& t : f.num.terms) {
        for (const auto& x : t.mono) on_gen(x.gen);
    }
    for (const auto& x : f.den) on_gen(x.gen);
}

bool any_gen(const Form& f, const std::function<bool(const Gen&)>& pred)
{
    bool found = false;
    visit(f, [&](const Gen& g) {
        if (found) return false;
        if (pred(g)) found = true;
        return !found;
    });
    return found;
}

// -- differentiation ------------------------------------------------------------------

Form Differentiator::operator()(const Form& f)
{
    if (f.is_zero()) return zero();
    const Monomial den_inv = mono_pow(f.den, Frac(-1));
    std::vector<LaurentTerm> out;
    for (const auto& term : f.num.terms) {
        const Monomial full = mono_mul(term.mono, den_inv);
        for (std::size_t k = 0; k < full.size(); ++k) {
            const Form& dg = gen_derivative(full[k].gen);
            if (dg.is_zero()) continue;
            Monomial base = full;
            base[k].exp = full[k].exp - Frac(1);
            if (base[k].exp.is_zero()) base.erase(base.begin() + static_cast<long>(k));
            const Q c = term.coeff * q_of(full[k].exp);
            const Monomial dden_inv = mono_pow(dg.den, Frac(-1));
            const Monomial left = mono_mul(base, dden_inv);
            for (const auto& s : dg.num.terms) out.push_back({c * s.coeff, mono_mul(left, s.mono)});
        }
    }
    return canonicalize(std::move(out));
}

const Form& Differentiator::gen_derivative(const Gen& g)
{
    auto it = cache_.find(g.get());
    if (it != cache_.end()) return it->second.second;
    Form d;
    switch (g->kind) {
    case GenKind::Root:
        break;
    case GenKind::Symbol:
        d = symbol_derivative(g->sym);
        break;
    case GenKind::Factor:
        d = (*this)(Form{g->poly, {}});
        break;
    case GenKind::Apply:
        d = apply_derivative(*g);
        break;
    }
    return cache_.emplace(g.get(), std::make_pair(g, std::move(d))).first->second.second;
}

Form Differentiator::apply_derivative(const GenNode& node)
{
    if (node.fn.builtin()) {
        const Form& arg = node.args.front();
        const Form da = (*this)(arg);
        if (da.is_zero()) return zero();
        auto call = [&](const char* name) { return from_gen(make_apply(FuncSym{name, {0}}, node.args)); };
        const std::string& n = node.fn.name;
        Form outer;
        if (n == "sin") outer = call("cos");
        else if (n == "cos") outer = neg(call("sin"));
        else if (n == "exp") outer = call("exp");
        else if (n == "sinh") outer = call("cosh");
        else if (n == "cosh") outer = call("sinh");
        else if (n == "log") outer = inv(arg);
        return mul(outer, da);
    }
    std::vector<Form> parts;
    for (std::size_t i = 0; i < node.args.size(); ++i) {
        const Form da = (*this)(node.args[i]);
        if (da.is_zero()) continue;
        FuncSym fn = node.fn;
        fn.deriv[i] += 1;
        parts.push_back(mul(from_gen(make_apply(std::move(fn), node.args)), da));
    }
    return sum(parts);
}

Form TotalDerivative::symbol_derivative(const Sym& s)
{
    switch (s.kind()) {
    case SymKind::IndepVar:
        return s.name() == dir_ ? constant(Q(1)) : zero();
    case SymKind::Param:
        return zero();
    case SymKind::Function:
        throw Error("bare function symbol " + s.name() + " cannot be differentiated");
    case SymKind::Jet: {
        const int pos = s.chart().position(dir_);
        if (pos < 0 || !s.depends_on(pos)) return zero();
        MultiIndex idx = s.index();
        idx[pos] += 1;
        return from_sym(s.with_index(idx));
    }
    }
    return zero();
}

Form PartialDerivative::symbol_derivative(const Sym& s)
{
    return s == target_ ? constant(Q(1)) : zero();
}

// -- substitution -------------------------------------------------------------------

Rewriter::Rewriter(SymbolRule sym_rule, ApplyRule apply_rule, const AssumptionSet& assumptions)
    : sym_rule_(std::move(sym_rule)), apply_rule_(std::move(apply_rule)), assumptions_(assumptions)
{
}

const std::optional<Form>& Rewriter::replacement(const Gen& g)
{
    auto it = cache_.find(g.get());
    if (it != cache_.end()) return it->second.second;
    std::optional<Form> r;
    switch (g->kind) {
    case GenKind::Root:
        break;
    case GenKind::Symbol:
        if (sym_rule_) r = sym_rule_(g->sym);
        break;
    case GenKind::Factor: {
        Form inner{g->poly, {}};
        Form next = (*this)(inner);
        if (!equal(next, inner)) r = std::move(next);
        break;
    }
    case GenKind::Apply: {
        std::vector<Form> args;
        bool changed = false;
        for (const auto& a : g->args) {
            args.push_back((*this)(a));
            if (!equal(args.back(), a)) changed = true;
        }
        if (apply_rule_) r = apply_rule_(g->fn, args);
        if (!r && changed) r = from_gen(make_apply(g->fn, std::move(args)));
        break;
    }
    }
    return cache_.emplace(g.get(), std::make_pair(g, std::move(r))).first->second.second;
}

const Form& Rewriter::powered(const Gen& g, Frac e)
{
    auto& slot = pow_cache_[g.get()];
    for (const auto& [exp, form] : slot) {
        if (exp == e) return form;
    }
    slot.emplace_back(e, pow(*replacement(g), e, assumptions_));
    return slot.back().second;
}

Form Rewriter::operator()(const Form& f)
{
    if (f.is_zero()) return f;
    bool changed = false;
    for (const auto& t : f.num.terms) {
        for (const auto& x : t.mono) {
            if (replacement(x.gen)) changed = true;
        }
    }
    for (const auto& x : f.den) {
        if (replacement(x.gen)) changed = true;
    }
    if (!changed) return f;

    std::vector<LaurentTerm> out;
    for (const auto& t : f.num.terms) {
        LaurentTerm base{t.coeff, {}};
        std::vector<const Factor*> moved;
        for (const auto& x : t.mono) {
            if (replacement(x.gen)) {
                moved.push_back(&x);
            } else {
                base.mono.push_back(x);
            }
        }
        if (moved.empty()) {
            out.push_back(std::move(base));
            continue;
        }
        Form acc = canonicalize({std::move(base)});
        for (const Factor* x : moved) {
            acc = mul(acc, powered(x->gen, x->exp));
            if (acc.is_zero()) break;
        }
        auto lt = laurent_terms(acc);
        out.insert(out.end(), std::make_move_iterator(lt.begin()), std::make_move_iterator(lt.end()));
    }
    Form result = canonicalize(std::move(out));
    LaurentTerm den_kept{Q(1), {}};
    Form den_moved = constant(Q(1));
    for (const auto& x : f.den) {
        if (replacement(x.gen)) {
            den_moved = mul(den_moved, powered(x.gen, -x.exp));
        } else {
            den_kept.mono.push_back(Factor{x.gen, -x.exp});
        }
    }
    result = mul(result, canonicalize({std::move(den_kept)}));
    return mul(result, den_moved);
}

// -- numeric evaluation -----------------------------------------------------------------

namespace {

class Evaluator {
public:
    Evaluator(const SymbolValues& values, const FunctionValues& functions) : values_(values), functions_(functions) {}

    double form(const Form& f)
    {
        double num = 0.0;
        for (const auto& t : f.num.terms) num += t.coeff.get_d() * mono(t.mono);
        const double den = mono(f.den);
        if (den == 0.0) throw DomainError("evaluation hit a vanishing denominator");
        return num / den;
    }

private:
    double mono(const Monomial& m)
    {
        double v = 1.0;
        for (const auto& f : m) {
            const double b = gen(f.gen);
            if (f.exp.is_integer()) {
                v *= std::pow(b, static_cast<double>(f.exp.num()));
            } else {
                if (b < 0.0) throw DomainError("negative radicand in numeric evaluation");
                v *= std::pow(b, static_cast<double>(f.exp.num()) / static_cast<double>(f.exp.den()));
            }
        }
        return v;
    }

    double gen(const Gen& g)
    {
        auto it = cache_.find(g.get());
        if (it != cache_.end()) return it->second.second;
        double v = 0.0;
        switch (g->kind) {
        case GenKind::Root:
            v = g->root.get_d();
            break;
        case GenKind::Symbol:
            v = values_(g->sym);
            break;
        case GenKind::Factor:
            v = form(Form{g->poly, {}});
            break;
        case GenKind::Apply: {
            if (!g->fn.builtin()) {
                std::vector<double> args;
                for (const auto& a : g->args) args.push_back(form(a));
                std::optional<double> r = functions_ ? functions_(g->fn, args) : std::nullopt;
                if (!r) throw UnboundSymbol("function " + g->fn.name + " has no numeric binding");
                v = *r;
                break;
            }
            const double a = form(g->args.front());
            const std::string& n = g->fn.name;
            if (n == "sin") v = std::sin(a);
            else if (n == "cos") v = std::cos(a);
            else if (n == "exp") v = std::exp(a);
            else if (n == "sinh") v = std::sinh(a);
            else if (n == "cosh") v = std::cosh(a);
            else if (n == "log") {
                if (a <= 0.0) throw DomainError("log of a non-positive value");
                v = std::log(a);
            }
            break;
        }
        }
        cache_.emplace(g.get(), std::make_pair(g, v));
        return v;
    }

    const SymbolValues& values_;
    const FunctionValues& functions_;
    std::unordered_map<const GenNode*, std::pair<Gen, double>> cache_;
};

}  // namespace

double evaluate(const Form& f, const SymbolValues& values, const FunctionValues& functions)
{
    Evaluator ev(values, functions);
    return ev.form(f);
}

}  // namespace ebeq::canon

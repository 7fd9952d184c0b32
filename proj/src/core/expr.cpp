#include "ebeq/core/expr.hpp"

#include "ebeq/core/errors.hpp"

#include <unordered_map>

namespace ebeq {

struct Expr::Node {
    Kind kind = Kind::Const;
    Q value;
    Sym sym;
    std::vector<Expr> children;
    Frac exp;
    FuncSym fn;
    std::optional<canon::Form> form;
};

namespace {

const std::vector<Expr>& no_children()
{
    static const std::vector<Expr> empty;
    return empty;
}

}  // namespace

Expr::Expr() : Expr(Q(0)) {}

Expr::Expr(const Q& q)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = q;
    // Q(6, 3) built from two integers is not reduced by GMP.
    n->value.canonicalize();
    node_ = std::move(n);
}

Expr Expr::atom(const Sym& s)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->sym = s;
    return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    Q c(0);
    for (auto& t : terms) {
        if (t.kind() == Kind::Const) {
            c += t.value();
        } else if (t.kind() == Kind::Sum && t.canonical() == nullptr) {
            for (const auto& s : t.children()) {
                if (s.kind() == Kind::Const) c += s.value();
                else flat.push_back(s);
            }
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (c != 0) flat.push_back(Expr(c));
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors)
{
    std::vector<Expr> flat;
    Q c(1);
    for (auto& f : factors) {
        if (f.kind() == Kind::Const) {
            c *= f.value();
        } else if (f.kind() == Kind::Product && f.canonical() == nullptr) {
            for (const auto& s : f.children()) {
                if (s.kind() == Kind::Const) c *= s.value();
                else flat.push_back(s);
            }
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (c == 0) return Expr();
    if (c != 1) flat.insert(flat.begin(), Expr(c));
    if (flat.empty()) return Expr(Q(1));
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->children = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::power(const Expr& base, Frac exp)
{
    if (exp.is_zero()) return Expr(Q(1));
    if (exp == Frac(1)) return base;
    if (base.kind() == Kind::Const && exp.is_integer() && (base.value() != 0 || exp > Frac(0)))
        return Expr(pow_int(base.value(), exp.num()));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->children = {base};
    n->exp = exp;
    return Expr(std::move(n));
}

Expr Expr::apply(FuncSym fn, std::vector<Expr> args)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Apply;
    n->fn = std::move(fn);
    n->children = std::move(args);
    return Expr(std::move(n));
}

namespace {

Expr gen_expr(const canon::Gen& g)
{
    switch (g->kind) {
    case canon::GenKind::Root:
        return Expr(Q(g->root));
    case canon::GenKind::Symbol:
        return Expr::atom(g->sym);
    case canon::GenKind::Factor:
        return Expr::from_form(canon::Form{g->poly, {}});
    case canon::GenKind::Apply: {
        std::vector<Expr> args;
        args.reserve(g->args.size());
        for (const auto& a : g->args) args.push_back(Expr::from_form(a));
        return Expr::apply(g->fn, std::move(args));
    }
    }
    return Expr();
}

std::vector<Expr> mono_factors(const canon::Monomial& m, Frac sign)
{
    std::vector<Expr> out;
    for (const auto& f : m) out.push_back(Expr::power(gen_expr(f.gen), f.exp * sign));
    return out;
}

}  // namespace

Expr Expr::from_form(const canon::Form& f)
{
    std::vector<Expr> terms;
    for (const auto& t : f.num.terms) {
        auto fs = mono_factors(t.mono, Frac(1));
        fs.insert(fs.begin(), Expr(t.coeff));
        terms.push_back(product(std::move(fs)));
    }
    Expr num = sum(std::move(terms));
    Expr out = num;
    if (!f.den.empty()) {
        std::vector<Expr> den = mono_factors(f.den, Frac(1));
        Expr d = den.size() == 1 ? den.front() : product(std::move(den));
        auto n = std::make_shared<Node>();
        n->kind = Kind::Product;
        n->children = {num, power(d, Frac(-1))};
        out = Expr(std::move(n));
    }
    auto n = std::make_shared<Node>(*out.node_);
    n->form = f;
    return Expr(std::move(n));
}

Expr factored(const canon::Form& f)
{
    if (f.num.size() <= 1) return Expr::from_form(f);
    auto [c, mono] = canon::factor_known(f.num);
    auto fs = mono_factors(mono, Frac(1));
    fs.insert(fs.begin(), Expr(c));
    auto den = mono_factors(f.den, Frac(-1));
    fs.insert(fs.end(), den.begin(), den.end());
    return Expr::product(std::move(fs));
}

Expr::Kind Expr::kind() const
{
    return node_->kind;
}

const Q& Expr::value() const
{
    return node_->value;
}

const Sym& Expr::sym() const
{
    return node_->sym;
}

const std::vector<Expr>& Expr::children() const
{
    return node_->children.empty() ? no_children() : node_->children;
}

Frac Expr::exponent() const
{
    return node_->exp;
}

const FuncSym& Expr::fn() const
{
    return node_->fn;
}

const canon::Form* Expr::canonical() const
{
    return node_->form ? &*node_->form : nullptr;
}

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_) return true;
    if (a.canonical() != nullptr && b.canonical() != nullptr) return canon::equal(*a.canonical(), *b.canonical());
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Expr::Kind::Const:
        return a.value() == b.value();
    case Expr::Kind::Atom:
        return a.sym() == b.sym();
    case Expr::Kind::Power:
        if (a.exponent() != b.exponent()) return false;
        break;
    case Expr::Kind::Apply:
        if (!(a.fn() == b.fn())) return false;
        break;
    default:
        break;
    }
    return a.children() == b.children();
}

Expr operator+(const Expr& a, const Expr& b)
{
    return Expr::sum({a, b});
}

Expr operator-(const Expr& a, const Expr& b)
{
    return Expr::sum({a, -b});
}

Expr operator-(const Expr& a)
{
    return Expr::product({Expr(Q(-1)), a});
}

Expr operator*(const Expr& a, const Expr& b)
{
    return Expr::product({a, b});
}

Expr operator/(const Expr& a, const Expr& b)
{
    return Expr::product({a, Expr::power(b, Frac(-1))});
}

Expr pow(const Expr& base, Frac exp)
{
    return Expr::power(base, exp);
}

Expr sqrt(const Expr& e)
{
    return Expr::power(e, Frac(1, 2));
}

Expr var(const std::string& name)
{
    return Expr::atom(Sym::indep(name));
}

Expr param(const std::string& name)
{
    return Expr::atom(Sym::param(name));
}

Expr jet(const JetFunction& fn, MultiIndex index)
{
    return Expr::atom(fn(index));
}

Expr call(const std::string& fn, std::vector<Expr> args)
{
    FuncSym f = FuncSym::is_builtin(fn) ? FuncSym{fn, {0}} : FuncSym::generic(fn, static_cast<int>(args.size()));
    return Expr::apply(std::move(f), std::move(args));
}

const AssumptionSet& default_assumptions()
{
    static const AssumptionSet as;
    return as;
}

namespace {

class FormBuilder {
public:
    explicit FormBuilder(const AssumptionSet& as) : as_(as) {}

    canon::Form build(const Expr& e)
    {
        if (const auto* f = e.canonical()) return *f;
        switch (e.kind()) {
        case Expr::Kind::Const:
            return canon::constant(e.value());
        case Expr::Kind::Atom:
            if (e.sym().kind() == SymKind::Function)
                throw Error("function symbol " + e.sym().name() + " must be applied to arguments");
            return canon::from_sym(e.sym());
        case Expr::Kind::Sum: {
            std::vector<canon::Form> parts;
            parts.reserve(e.children().size());
            for (const auto& c : e.children()) parts.push_back(build(c));
            return canon::sum(parts);
        }
        case Expr::Kind::Product: {
            canon::Form acc = canon::constant(Q(1));
            for (const auto& c : e.children()) {
                acc = canon::mul(acc, build(c));
                if (acc.is_zero()) break;
            }
            return acc;
        }
        case Expr::Kind::Power:
            return power(e.base(), e.exponent());
        case Expr::Kind::Apply: {
            std::vector<canon::Form> args;
            for (const auto& c : e.children()) args.push_back(build(c));
            if (e.fn().builtin() && args.size() != 1) throw Error(e.fn().name + " takes one argument");
            if (e.fn().builtin()) {
                if (e.fn().name == "exp" && args.front().is_zero()) return canon::constant(Q(1));
                if (e.fn().name == "log" && canon::constant_value(args.front()) == Q(1)) return canon::zero();
                if ((e.fn().name == "sin" || e.fn().name == "sinh") && args.front().is_zero()) return canon::zero();
                if ((e.fn().name == "cos" || e.fn().name == "cosh") && args.front().is_zero())
                    return canon::constant(Q(1));
            }
            return canon::from_gen(canon::make_apply(e.fn(), std::move(args)));
        }
        }
        return canon::zero();
    }

private:
    // Powers of powers and of products distribute the exponent before canonicalizing,
    // so (a^2 b)^(1/2) becomes a b^(1/2) under the positivity of a.
    canon::Form power(const Expr& base, Frac r)
    {
        if (base.canonical() == nullptr && as_.radicands_positive()) {
            if (base.kind() == Expr::Kind::Power) return power(base.base(), base.exponent() * r);
        }
        return canon::pow(build(base), r, as_);
    }

    const AssumptionSet& as_;
};

}  // namespace

canon::Form to_form(const Expr& e, const AssumptionSet& as)
{
    FormBuilder b(as);
    return b.build(e);
}

}  // namespace ebeq

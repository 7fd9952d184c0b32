#include "ebeq/io/print.hpp"

#include <cstdlib>

namespace ebeq {

namespace {

enum class Prec { Sum = 0, Product = 1, Unary = 2, Power = 3, Atom = 4 };

std::string print_prec(const Expr& e, Prec ctx);

std::string wrap(const std::string& s, Prec own, Prec ctx)
{
    return own < ctx ? "(" + s + ")" : s;
}

std::string print_apply(const Expr& e)
{
    const FuncSym& fn = e.fn();
    std::string head = fn.name;
    bool tagged = false;
    for (int d : fn.deriv) tagged = tagged || d != 0;
    if (tagged) {
        if (fn.arity() == 1) {
            head += std::string(static_cast<std::size_t>(fn.deriv[0]), '\'');
        } else {
            head += "'[";
            for (std::size_t i = 0; i < fn.deriv.size(); ++i) {
                if (i > 0) head += ",";
                head += std::to_string(fn.deriv[i]);
            }
            head += "]";
        }
    }
    head += "(";
    for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i > 0) head += ", ";
        head += print_prec(e.children()[i], Prec::Sum);
    }
    return head + ")";
}

// A factor with its sign pulled out, and whether it goes below the fraction bar.
struct Piece {
    Expr base;
    Frac exp;
};

std::string print_power(const Expr& base, Frac exp)
{
    std::string b = print_prec(base, Prec::Atom);
    if (base.kind() == Expr::Kind::Const && base.value() >= 0 && base.value().get_den() == 1)
        b = to_string(base.value());
    if (exp == Frac(1)) return print_prec(base, Prec::Power);
    if (exp.is_integer() && exp > Frac(0)) return b + "^" + exp.str();
    return b + "^(" + exp.str() + ")";
}

std::string print_product(const Expr& e, Prec ctx, bool& negative)
{
    Q coeff(1);
    std::vector<Piece> num;
    std::vector<Piece> den;
    auto take = [&](const Expr& f, auto&& self) -> void {
        if (f.kind() == Expr::Kind::Const) {
            coeff *= f.value();
        } else if (f.kind() == Expr::Kind::Product && f.canonical() == nullptr) {
            for (const auto& c : f.children()) self(c, self);
        } else if (f.kind() == Expr::Kind::Power && f.exponent() < Frac(0)) {
            den.push_back({f.base(), -f.exponent()});
        } else if (f.kind() == Expr::Kind::Power) {
            num.push_back({f.base(), f.exponent()});
        } else {
            num.push_back({f, Frac(1)});
        }
    };
    if (e.kind() == Expr::Kind::Product) {
        for (const auto& c : e.children()) take(c, take);
    } else {
        take(e, take);
    }
    negative = coeff < 0;
    if (negative) coeff = -coeff;

    auto join = [](const std::vector<Piece>& ps, Prec inner) {
        std::string s;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (i > 0) s += "*";
            s += ps[i].exp == Frac(1) ? print_prec(ps[i].base, inner) : print_power(ps[i].base, ps[i].exp);
        }
        return s;
    };
    std::string top;
    const Q cnum(coeff.get_num());
    const Q cden(coeff.get_den());
    if (num.empty()) {
        top = to_string(cnum);
    } else {
        const bool single_sum = num.size() == 1 && num[0].exp == Frac(1) && num[0].base.kind() == Expr::Kind::Sum;
        const bool bare = single_sum && cnum == 1 && den.empty() && cden == 1;
        top = join(num, bare ? Prec::Sum : Prec::Power);
        if (cnum != 1) top = to_string(cnum) + "*" + top;
        if (bare) return wrap(top, Prec::Sum, ctx);
    }
    if (den.empty() && cden == 1) return wrap(top, Prec::Product, ctx);
    std::vector<Piece> bottom = den;
    std::string b = join(bottom, Prec::Power);
    if (cden != 1) b = bottom.empty() ? to_string(cden) : to_string(cden) + "*" + b;
    const std::size_t nfactors = bottom.size() + (cden != 1 ? 1 : 0);
    if (nfactors > 1) b = "(" + b + ")";
    return wrap(top + "/" + b, Prec::Product, ctx);
}

std::string print_prec(const Expr& e, Prec ctx)
{
    switch (e.kind()) {
    case Expr::Kind::Const: {
        const Q& q = e.value();
        std::string s = to_string(q);
        if (q < 0) return wrap(s, Prec::Unary, ctx);
        if (q.get_den() != 1) return wrap(s, Prec::Product, ctx);
        return s;
    }
    case Expr::Kind::Atom:
        return e.sym().str();
    case Expr::Kind::Apply:
        return print_apply(e);
    case Expr::Kind::Power: {
        if (e.exponent() < Frac(0)) {
            bool neg = false;
            return print_product(e, ctx, neg);
        }
        return wrap(print_power(e.base(), e.exponent()), Prec::Power, ctx);
    }
    case Expr::Kind::Product: {
        bool neg = false;
        std::string s = print_product(e, Prec::Product, neg);
        if (!neg) return wrap(s, Prec::Product, ctx);
        return wrap("-" + s, Prec::Unary, ctx);
    }
    case Expr::Kind::Sum: {
        std::string s;
        bool first = true;
        for (const auto& t : e.children()) {
            bool neg = false;
            std::string body;
            if (t.kind() == Expr::Kind::Product) {
                body = print_product(t, Prec::Product, neg);
            } else if (t.kind() == Expr::Kind::Const && t.value() < 0) {
                neg = true;
                body = print_prec(Expr(-t.value()), Prec::Product);
            } else {
                body = print_prec(t, Prec::Product);
            }
            if (first) s = neg ? "-" + body : body;
            else s += (neg ? " - " : " + ") + body;
            first = false;
        }
        return wrap(s, Prec::Sum, ctx);
    }
    }
    return {};
}

}  // namespace

std::string print(const Expr& e)
{
    return print_prec(e, Prec::Sum);
}

std::string print(const canon::Form& f)
{
    return print(Expr::from_form(f));
}

}  // namespace ebeq

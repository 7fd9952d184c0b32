#pragma once

#include "ebeq/core/assumptions.hpp"
#include "ebeq/core/canon.hpp"
#include "ebeq/core/rational.hpp"
#include "ebeq/core/symbol.hpp"

#include <memory>
#include <vector>

namespace ebeq {

/// Immutable expression tree. Trees produced by normalize() carry their canonical
/// form, which makes repeated normalization and comparison cheap.
class Expr {
public:
    enum class Kind : std::uint8_t { Const, Atom, Sum, Product, Power, Apply };

    Expr();
    Expr(const Q& q);
    Expr(long n) : Expr(Q(n)) {}
    Expr(int n) : Expr(Q(n)) {}

    static Expr constant(const Q& q) { return Expr(q); }
    static Expr atom(const Sym& s);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(const Expr& base, Frac exp);
    static Expr apply(FuncSym fn, std::vector<Expr> args);
    static Expr from_form(const canon::Form& f);

    Kind kind() const;
    const Q& value() const;
    const Sym& sym() const;
    /// Summands, factors, the single power base, or application arguments.
    const std::vector<Expr>& children() const;
    const Expr& base() const { return children().front(); }
    Frac exponent() const;
    const FuncSym& fn() const;

    /// Attached canonical form, when this tree came out of normalize().
    const canon::Form* canonical() const;

    bool is_const() const { return kind() == Kind::Const; }
    /// Tree equality; canonical trees compare by their forms.
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, Frac exp);
Expr sqrt(const Expr& e);

/// Display tree of a form with known polynomial factors pulled out of the numerator.
/// Normalizes back to the same form.
Expr factored(const canon::Form& f);

/// Convenience constructors.
Expr var(const std::string& name);
Expr param(const std::string& name);
Expr jet(const JetFunction& fn, MultiIndex index = {0, 0});
Expr call(const std::string& fn, std::vector<Expr> args);

/// The permissive default: every radicand positive.
const AssumptionSet& default_assumptions();

canon::Form to_form(const Expr& e, const AssumptionSet& as = default_assumptions());

}  // namespace ebeq

#pragma once

// Canonical rational-radical forms.
//
// A Form is  num / den  where
//   * den is a monomial of generators with positive integer exponents,
//   * num is an expanded polynomial whose monomials carry
//       - symbol and application generators with exponents >= 0 (any rational),
//       - factor generators (opaque polynomials) and integer roots with exponents in (0, 1).
// Integer powers of factor generators in the numerator are always multiplied out, so
// two forms are structurally equal exactly when they agree as rational functions in
// algebraically independent generators.

#include "ebeq/core/rational.hpp"
#include "ebeq/core/symbol.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace ebeq {
class AssumptionSet;
}

namespace ebeq::canon {

struct GenNode;
using Gen = std::shared_ptr<const GenNode>;

enum class GenKind : std::uint8_t { Root = 0, Factor = 1, Symbol = 2, Apply = 3 };

struct Factor {
    Gen gen;
    Frac exp;
};

/// Sorted ascending by generator order, no zero exponents.
using Monomial = std::vector<Factor>;

struct Term {
    Monomial mono;
    Q coeff;
};

/// Terms sorted descending in the graded monomial order; coefficients nonzero.
struct Poly {
    std::vector<Term> terms;

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
};

struct Form {
    Poly num;
    Monomial den;

    bool is_zero() const { return num.empty(); }
};

struct GenNode {
    GenKind kind = GenKind::Symbol;
    std::size_t hash = 0;
    mpz_class root;          // Root: integer base > 1
    Poly poly;               // Factor: primitive polynomial
    Sym sym;                 // Symbol
    FuncSym fn;              // Apply
    std::vector<Form> args;  // Apply
};

// -- ordering and hashing ---------------------------------------------------
int compare(const Gen& a, const Gen& b);
int compare(const Monomial& a, const Monomial& b);
int compare(const Poly& a, const Poly& b);
int compare(const Form& a, const Form& b);
inline bool equal(const Form& a, const Form& b) { return compare(a, b) == 0; }
std::size_t hash_value(const Monomial& m);
std::size_t hash_value(const Poly& p);
std::size_t hash_value(const Form& f);

struct GenLess {
    bool operator()(const Gen& a, const Gen& b) const { return compare(a, b) < 0; }
};

// -- generators ------------------------------------------------------------
Gen make_root(const mpz_class& base);
Gen make_factor(Poly primitive);
Gen make_symbol(const Sym& sym);
Gen make_apply(FuncSym fn, std::vector<Form> args);

// -- construction -----------------------------------------------------------
Form zero();
Form constant(const Q& q);
Form from_gen(const Gen& g, Frac exp = Frac(1));
Form from_sym(const Sym& s);
std::optional<Q> constant_value(const Form& f);

/// Coefficient times a monomial whose exponents may have any sign.
struct LaurentTerm {
    Q coeff;
    Monomial mono;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
Monomial mono_pow(const Monomial& a, Frac r);

/// Bring an arbitrary sum of Laurent terms to canonical form.
Form canonicalize(std::vector<LaurentTerm> terms);

/// Split a nonzero polynomial as c * m * P with P primitive (integer coefficients,
/// positive leading coefficient) and m the common monomial content.
std::tuple<Q, Monomial, Poly> split_content(const Poly& p);

/// Exact quotient p / d when d divides p, otherwise empty.
std::optional<Poly> divide(const Poly& p, const Poly& d);
/// q with q*q == p, when p is a perfect square with even exponents in its leading term.
std::optional<Poly> square_root(const Poly& p);

/// p = c * (product of generator powers) using known factor generators, for display.
/// Integer powers of factor generators may exceed one in the returned monomial.
std::pair<Q, Monomial> factor_known(const Poly& p);

// -- arithmetic --------------------------------------------------------------
Form neg(const Form& a);
Form add(const Form& a, const Form& b);
Form sub(const Form& a, const Form& b);
Form mul(const Form& a, const Form& b);
Form sum(const std::vector<Form>& parts);
Form inv(const Form& a);
Form pow(const Form& a, Frac r, const AssumptionSet& assumptions);

// -- traversal ---------------------------------------------------------------
/// Visits every generator reachable from `f`, including those nested in factor
/// polynomials and application arguments. The visitor returns false to stop descent.
void visit(const Form& f, const std::function<bool(const Gen&)>& visitor);
bool any_gen(const Form& f, const std::function<bool(const Gen&)>& pred);

// -- differentiation ---------------------------------------------------------
/// Derivation on forms, parameterised by the derivative of each symbol.
/// Memoizes generator derivatives for the lifetime of the object only.
class Differentiator {
public:
    virtual ~Differentiator() = default;
    Form operator()(const Form& f);

protected:
    virtual Form symbol_derivative(const Sym& s) = 0;

private:
    const Form& gen_derivative(const Gen& g);
    Form apply_derivative(const GenNode& node);

    std::unordered_map<const GenNode*, std::pair<Gen, Form>> cache_;
};

/// D_dir with the jet convention: jet atoms of a chart containing `dir` step their
/// multi-index, parameters are constants.
class TotalDerivative final : public Differentiator {
public:
    explicit TotalDerivative(std::string dir) : dir_(std::move(dir)) {}

protected:
    Form symbol_derivative(const Sym& s) override;

private:
    std::string dir_;
};

/// Partial derivative with respect to one symbol, all other symbols held fixed.
class PartialDerivative final : public Differentiator {
public:
    explicit PartialDerivative(Sym target) : target_(std::move(target)) {}

protected:
    Form symbol_derivative(const Sym& s) override;

private:
    Sym target_;
};

// -- substitution ------------------------------------------------------------
/// Generator-wise rewriting. `replace` returns the replacement of a symbol or
/// application generator, or nothing to keep it (application arguments are still
/// rewritten recursively).
class Rewriter {
public:
    using SymbolRule = std::function<std::optional<Form>(const Sym&)>;
    using ApplyRule = std::function<std::optional<Form>(const FuncSym&, const std::vector<Form>&)>;

    Rewriter(SymbolRule sym_rule, ApplyRule apply_rule, const AssumptionSet& assumptions);
    Form operator()(const Form& f);

private:
    const std::optional<Form>& replacement(const Gen& g);
    const Form& powered(const Gen& g, Frac e);

    SymbolRule sym_rule_;
    ApplyRule apply_rule_;
    const AssumptionSet& assumptions_;
    std::unordered_map<const GenNode*, std::pair<Gen, std::optional<Form>>> cache_;
    std::unordered_map<const GenNode*, std::vector<std::pair<Frac, Form>>> pow_cache_;
};

// -- numeric evaluation -------------------------------------------------------
using SymbolValues = std::function<double(const Sym&)>;
/// Value of a non-builtin application at numeric arguments, or nothing when unbound.
using FunctionValues = std::function<std::optional<double>(const FuncSym&, const std::vector<double>&)>;
double evaluate(const Form& f, const SymbolValues& values, const FunctionValues& functions = {});

}  // namespace ebeq::canon

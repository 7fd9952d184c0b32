#pragma once

#include "ebeq/core/ops.hpp"
#include "ebeq/jet/linop.hpp"

#include <optional>

namespace ebeq::transform {

enum class Flavor { Classic, Generalized };

/// (f u_xx)_xx + m u_tt = 0 with f, m of x (classic) or of (t, x) (generalized).
/// Without a body, f and m stay opaque function symbols.
struct EbEquation {
    Flavor flavor = Flavor::Classic;
    std::optional<Expr> f_body;
    std::optional<Expr> m_body;

    static EbEquation classic() { return {}; }
    static EbEquation generalized() { return {Flavor::Generalized, std::nullopt, std::nullopt}; }

    /// f evaluated at the point (t, x); the classic flavor ignores t.
    Expr f_at(const Expr& t, const Expr& x) const;
    Expr m_at(const Expr& t, const Expr& x) const;

    /// The left-hand side applied to an expression u in t, x (or the jets of u).
    Expr apply(const Expr& u) const;
    /// The left-hand side on the unknown u: (f u_xx)_xx + m u_tt.
    Expr residual() const;
};

/// t = R, x = S, u = L w + J, all functions of (y, z).
struct PointTransformation {
    Expr R;
    Expr S;
    Expr L;
    Expr J;
};

/// Linear equation in w over (y, z): sum of coeffs[K] * w_K plus inhom.
struct LinearPde {
    std::map<MultiIndex, Expr, GradedLess> coeffs;
    Expr inhom;

    Expr reassemble() const;
};

const JetFunction& w_function();
const JetFunction& u_function();

/// Rewrites the equation in the new variables and collects it by the jets of w.
LinearPde transform_pde(const EbEquation& eq, const PointTransformation& T,
                        const AssumptionSet& as = default_assumptions());

/// The w-free part of the transformed equation, i.e. the image of u = J.
Expr constant_component(const EbEquation& eq, const PointTransformation& T,
                        const AssumptionSet& as = default_assumptions());

/// pde = mu * ((F w_zz)_zz + M w_yy).
struct EbForm {
    Expr F;
    Expr M;
    Expr mu;
};

/// Discovers F, M, mu. F is fixed by F_z / F = c_zzz / (2 c_zzzz) through a product of
/// powers of the z-dependent generators; factors depending on y alone are left in mu.
std::optional<EbForm> match_eb_form(const LinearPde& pde, const AssumptionSet& as = default_assumptions());

/// Checks a given candidate pair; returns mu when pde is proportional to the EB form of (F, M).
std::optional<Expr> check_eb_form(const LinearPde& pde, const Expr& F, const Expr& M,
                                  const AssumptionSet& as = default_assumptions());

}  // namespace ebeq::transform

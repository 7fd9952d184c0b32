#pragma once

#include "ebeq/core/canon.hpp"

#include <set>
#include <string>
#include <vector>

namespace ebeq {

/// Sign facts about parameter combinations and function symbols.
///
/// In the default mode every radicand is taken to be positive, so radical rewrites
/// always go through. In strict mode a radical rewrite is refused with
/// AssumptionMissing unless its radicand was registered with assume_positive.
class AssumptionSet {
public:
    AssumptionSet() = default;

    static AssumptionSet permissive() { return AssumptionSet(); }
    static AssumptionSet strict();

    bool radicands_positive() const { return radicands_positive_; }

    /// `e` must be c * g^r with c > 0 for a single generator g (a symbol, a function
    /// application or an irreducible polynomial).
    void assume_positive(const canon::Form& e);
    /// Registers every generator of a nonzero product.
    void assume_nonzero(const canon::Form& e);
    /// Undifferentiated applications of `name` are positive, e.g. f and m.
    void assume_positive_function(const std::string& name);

    bool is_positive(const canon::Gen& g) const;
    bool is_nonzero(const canon::Gen& g) const;
    /// A product of generators that are all known to be nonzero.
    bool is_nonzero(const canon::Form& e) const;

    /// Throws AssumptionMissing in strict mode when g is not known positive.
    void require_positive(const canon::Gen& g) const;

private:
    static canon::Poly key_of(const canon::Gen& g);
    static bool matches(const std::vector<canon::Poly>& table, const canon::Poly& p, bool up_to_sign);

    bool radicands_positive_ = true;
    std::vector<canon::Poly> positive_;
    std::vector<canon::Poly> nonzero_;
    std::set<std::string> positive_functions_;
};

}  // namespace ebeq

#pragma once

#include "ebeq/core/expr.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace ebeq {

/// Name resolution for the expression grammar.
///
///   identifiers   y z t x are independent variables; R S L J w are unknown functions
///                 over (y,z), h over z, u over (t,x); any other bare name is a parameter
///   jets          R_yyz, u_tx, h_zz
///   applications  f(S), sin(y), f'(S), f''(S), f'[1,0](t, x)
///   derivatives   D[y](expr)
///   numbers       integers and decimals, read exactly
class SymbolTable {
public:
    SymbolTable();

    void add_variable(const std::string& name);
    void add_jet_function(const JetFunction& fn);
    const JetFunction* jet_function(std::string_view name) const;
    bool is_variable(std::string_view name) const;

private:
    std::set<std::string, std::less<>> variables_;
    std::map<std::string, JetFunction, std::less<>> jets_;
};

const SymbolTable& default_symbols();

Expr parse(std::string_view text, const SymbolTable& table = default_symbols());

}  // namespace ebeq

#pragma once

#include <stdexcept>
#include <string>

namespace ebeq {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A radical rewrite needed a sign assumption that is not registered.
class AssumptionMissing : public Error {
public:
    using Error::Error;
};

class InconsistentBinding : public Error {
public:
    using Error::Error;
};

/// The collected family occurs inside a radical, a denominator or a function argument.
class NotPolynomial : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

/// A printed closed form is undefined for the requested parameters.
class DegenerateChart : public Error {
public:
    using Error::Error;
};

/// A composed Moebius map left the chart with unit constant denominator term.
class ChartBoundary : public Error {
public:
    using Error::Error;
};

class NonInvertible : public Error {
public:
    using Error::Error;
};

class UnboundSymbol : public Error {
public:
    using Error::Error;
};

/// Numeric evaluation left the real domain (negative radicand, division by zero).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numeric sample violated the singular-locus margins of its scene.
class SingularPoint : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace ebeq

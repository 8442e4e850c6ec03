#pragma once

#include <stdexcept>
#include <string>

namespace varic {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation would produce a jet coordinate above the configured maximum order.
class MaxOrderExceeded : public Error {
public:
    using Error::Error;
};

/// Input lies outside the supported function class (non-integer exponent,
/// non-polynomial homotopy integrand, division by a possibly-zero symbol, ...).
class UnsupportedClass : public Error {
public:
    using Error::Error;
};

/// A referenced symbol has no value or declaration.
class UnboundSymbol : public Error {
public:
    using Error::Error;
};

/// An operation precondition was violated by its arguments.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A search or enumeration hit its configured size cap.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

/// A self-check of the toolkit failed; indicates a bug rather than bad input.
class InvariantBreach : public Error {
public:
    using Error::Error;
};

}  // namespace varic

#pragma once

#include <stdexcept>
#include <string>

namespace conglab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated algebraic contract: non-unit leading coefficient, ramified
/// modulus, mismatched coefficient domains, and the like.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation asked for coefficients outside the known window.
/// Truncation must never be confused with vanishing, so this is fatal.
class PrecisionError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace conglab

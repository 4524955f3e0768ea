#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input or mismatched operands (cross-field arithmetic, singular curve, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed the configured field-size limit.
class LimitError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed (e.g. a Frobenius permutation that is not a group automorphism).
class VerificationError : public Error {
public:
    using Error::Error;
};

} // namespace twistlab

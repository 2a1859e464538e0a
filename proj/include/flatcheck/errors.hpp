#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flatcheck {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live over different variable splits.
class SplitMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed polynomial literal or problem file. `position` is a 0-based
/// offset into the offending text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position, std::string token)
        : Error(what), position_(position), token_(std::move(token)) {}
    std::size_t position() const { return position_; }
    const std::string& token() const { return token_; }

private:
    std::size_t position_;
    std::string token_;
};

/// A series is not x_m-regular (or not regular to the available order).
class NotRegular : public Error {
public:
    using Error::Error;
};

/// Truncation left no usable precision for the requested operation.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

/// No linear change in the retry budget made the series x_m-regular.
class RegularizationFailed : public Error {
public:
    using Error::Error;
};

/// A checked algebraic identity failed; indicates a bug, never bad input.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace flatcheck

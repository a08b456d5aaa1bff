#pragma once

#include <stdexcept>
#include <string>

namespace matchkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition. The CLI maps it to exit code 2.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A size cap (enumeration limit, group order limit) was exceeded.
class LimitExceeded : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A free-abelian product left the declared coordinate window.
class WindowOverflow : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A computed result contradicts a proven statement; always a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// A search ran out of budget before reaching a verdict.
class Inconclusive : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what);
}

} // namespace detail
} // namespace matchkit

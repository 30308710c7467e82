#pragma once

#include <stdexcept>
#include <string>

namespace mwrc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotPrimeError final : public Error {
public:
    using Error::Error;
};

class NotIrreducibleError final : public Error {
public:
    using Error::Error;
};

class DegreeMismatchError final : public Error {
public:
    using Error::Error;
};

class ZeroInverseError final : public Error {
public:
    using Error::Error;
};

class OutOfRangeError final : public Error {
public:
    using Error::Error;
};

class InvalidPmfError final : public Error {
public:
    using Error::Error;
};

class BadDimensionsError final : public Error {
public:
    using Error::Error;
};

class LengthMismatchError final : public Error {
public:
    using Error::Error;
};

class MessageTooLargeError final : public Error {
public:
    using Error::Error;
};

class BudgetExceededError final : public Error {
public:
    using Error::Error;
};

class EmptyCandidatesError final : public Error {
public:
    using Error::Error;
};

/// Thrown when a blocklength does not yield integral sub-block lengths.
/// Carries the smallest n that would; every valid n is a multiple of it.
class IndivisibleBlocklengthError final : public Error {
public:
    IndivisibleBlocklengthError(const std::string& what, long long minimal_n)
        : Error(what), minimal_n_(minimal_n) {}
    long long minimal_valid_n() const { return minimal_n_; }

private:
    long long minimal_n_;
};

/// Configuration / parse errors (bad keys, invalid channel parameters).
class ConfigError final : public Error {
public:
    using Error::Error;
};

}  // namespace mwrc

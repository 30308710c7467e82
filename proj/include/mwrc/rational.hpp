#pragma once

#include <cstdint>
#include <string>

#include "mwrc/errors.hpp"

namespace mwrc {

/// Exact rational in canonical form: den > 0, gcd(num, den) = 1.
/// Arithmetic goes through 128-bit intermediates and throws on overflow,
/// which never happens at the magnitudes this library works with.
class Rational {
public:
    Rational() = default;
    Rational(long long num, long long den);
    Rational(long long value) : num_(value) {}  // NOLINT(google-explicit-constructor)

    /// Accepts "0.3", ".5", "7", and "3/10".
    static Rational parse(const std::string& text);

    long long num() const { return num_; }
    long long den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Canonical text form: "3/10", or just "3" for integers.
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

private:
    long long num_ = 0;
    long long den_ = 1;
};

long long lcm_checked(long long a, long long b);

}  // namespace mwrc

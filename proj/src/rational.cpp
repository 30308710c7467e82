#include "mwrc/rational.hpp"

#include <cstdlib>
#include <numeric>

namespace mwrc {

namespace {

using Wide = __int128;

long long narrow(Wide v, const char* context) {
    if (v > Wide(0x7fffffffffffffffLL) || v < -Wide(0x7fffffffffffffffLL)) {
        throw Error(std::string("rational overflow in ") + context);
    }
    return static_cast<long long>(v);
}

Rational make_reduced(Wide num, Wide den, const char* context) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide a = num < 0 ? -num : num;
    Wide b = den;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) a = 1;
    return {narrow(num / a, context), narrow(den / a, context)};
}

}  // namespace

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g == 0) g = 1;
    num_ /= g;
    den_ /= g;
}

Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw Error("empty rational literal");
    for (char ch : text) {
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '/')) {
            throw Error("bad rational literal '" + text + "'");
        }
    }
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string p = text.substr(0, slash);
        const std::string q = text.substr(slash + 1);
        if (p.empty() || q.empty() || p.find('.') != std::string::npos ||
            q.find('.') != std::string::npos) {
            throw Error("bad rational literal '" + text + "'");
        }
        return Rational(std::strtoll(p.c_str(), nullptr, 10), std::strtoll(q.c_str(), nullptr, 10));
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational(std::strtoll(text.c_str(), nullptr, 10), 1);
    }
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.find('.') != std::string::npos) throw Error("bad rational literal '" + text + "'");
    if (frac.size() > 18) throw Error("rational literal '" + text + "' has too many digits");
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const long long w = whole.empty() ? 0 : std::strtoll(whole.c_str(), nullptr, 10);
    const long long f = frac.empty() ? 0 : std::strtoll(frac.c_str(), nullptr, 10);
    return make_reduced(Wide(w) * den + f, den, "parse");
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_, "+");
}

Rational operator-(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_, "-");
}

Rational operator*(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_, "*");
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_, "/");
}

bool operator<(const Rational& a, const Rational& b) {
    return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
}

long long lcm_checked(long long a, long long b) {
    const long long g = std::gcd(a, b);
    return narrow(Wide(a) / g * b, "lcm");
}

}  // namespace mwrc

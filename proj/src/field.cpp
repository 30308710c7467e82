#include "mwrc/field.hpp"

#include <algorithm>

namespace mwrc {

namespace {

using Poly = std::vector<std::uint32_t>;  // coefficient of x^i at index i

int poly_degree(const Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
        if (p[std::size_t(i)] != 0) return i;
    }
    return -1;
}

// Remainder of a modulo m over Z_p; m must be monic.
Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
    const int dm = poly_degree(m);
    int da = poly_degree(a);
    while (da >= dm) {
        const std::uint64_t lead = a[std::size_t(da)];
        for (int i = 0; i <= dm; ++i) {
            const std::uint64_t sub = lead * m[std::size_t(i)] % p;
            const std::uint64_t cur = a[std::size_t(da - dm + i)];
            a[std::size_t(da - dm + i)] = static_cast<std::uint32_t>((cur + p - sub) % p);
        }
        da = poly_degree(a);
    }
    a.resize(std::size_t(dm > 0 ? dm : 1), 0);
    if (a.empty()) a.push_back(0);
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = static_cast<std::uint32_t>(
                (out[i + j] + std::uint64_t(a[i]) * b[j]) % p);
        }
    }
    return out;
}

bool poly_is_zero(const Poly& p) { return poly_degree(p) < 0; }

std::string poly_str(const Poly& p) {
    std::string s;
    for (int i = poly_degree(p); i >= 0; --i) {
        const std::uint32_t c = p[std::size_t(i)];
        if (c == 0) continue;
        if (!s.empty()) s += " + ";
        if (i == 0 || c != 1) s += std::to_string(c);
        if (i >= 1) {
            s += "x";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

// Packs non-leading coefficients of a monic degree-d candidate from an index.
Poly candidate_from_index(std::uint64_t idx, std::uint32_t degree, std::uint32_t p) {
    Poly c(degree + 1, 0);
    for (std::uint32_t i = 0; i < degree; ++i) {
        c[i] = static_cast<std::uint32_t>(idx % p);
        idx /= p;
    }
    c[degree] = 1;
    return c;
}

// Exhaustive factor search: a degree-d polynomial is reducible iff it has a
// monic factor of degree in [1, d/2]. Returns such a factor if one exists.
std::optional<Poly> find_monic_factor(const Poly& m, std::uint32_t p) {
    const int d = poly_degree(m);
    for (int fd = 1; fd <= d / 2; ++fd) {
        std::uint64_t count = 1;
        for (int i = 0; i < fd; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Poly f = candidate_from_index(idx, std::uint32_t(fd), p);
            if (poly_is_zero(poly_mod(m, f, p))) return f;
        }
    }
    return std::nullopt;
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint32_t characteristic,
                                                std::uint32_t degree) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < degree; ++i) count *= characteristic;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        Poly c = candidate_from_index(idx, degree, characteristic);
        if (degree == 1 || !find_monic_factor(c, characteristic)) return c;
    }
    throw Error("no irreducible polynomial found");  // unreachable for prime char
}

Field Field::make(std::uint32_t characteristic, std::uint32_t degree,
                  const std::optional<std::vector<std::uint32_t>>& modulus) {
    if (!is_prime_u32(characteristic)) {
        throw NotPrimeError("field characteristic " + std::to_string(characteristic) +
                            " is not prime");
    }
    if (degree < 1) throw DegreeMismatchError("extension degree must be at least 1");

    std::uint64_t order = 1;
    for (std::uint32_t i = 0; i < degree; ++i) {
        order *= characteristic;
        if (order > kMaxOrder) {
            throw BadDimensionsError("field order exceeds " + std::to_string(kMaxOrder));
        }
    }

    Field f;
    f.char_ = characteristic;
    f.deg_ = degree;
    f.order_ = static_cast<std::uint32_t>(order);

    if (modulus) {
        const Poly& m = *modulus;
        if (m.size() != std::size_t(degree) + 1 || m.back() != 1) {
            throw DegreeMismatchError("modulus must be monic of degree " + std::to_string(degree) +
                                      " with coefficients listed from degree 0 upward");
        }
        for (std::uint32_t c : m) {
            if (c >= characteristic) {
                throw DegreeMismatchError("modulus coefficient " + std::to_string(c) +
                                          " is not reduced modulo " +
                                          std::to_string(characteristic));
            }
        }
        if (degree > 1) {
            if (auto factor = find_monic_factor(m, characteristic)) {
                throw NotIrreducibleError("modulus " + poly_str(m) + " is reducible over Z_" +
                                          std::to_string(characteristic) + ": divisible by " +
                                          poly_str(*factor));
            }
        }
        f.modulus_ = m;
    } else {
        f.modulus_ = smallest_irreducible(characteristic, degree);
    }

    f.build_tables();
    return f;
}

Field::Elem Field::add_direct(Elem a, Elem b) const {
    std::uint32_t out = 0;
    std::uint32_t mult = 1;
    std::uint32_t ua = a, ub = b;
    for (std::uint32_t i = 0; i < deg_; ++i) {
        const std::uint32_t da = ua % char_;
        const std::uint32_t db = ub % char_;
        out += ((da + db) % char_) * mult;
        ua /= char_;
        ub /= char_;
        mult *= char_;
    }
    return static_cast<Elem>(out);
}

Field::Elem Field::mul_direct(Elem a, Elem b) const {
    // Schoolbook product of the coefficient vectors, then reduction.
    Poly pa(deg_, 0), pb(deg_, 0);
    std::uint32_t ua = a, ub = b;
    for (std::uint32_t i = 0; i < deg_; ++i) {
        pa[i] = ua % char_;
        pb[i] = ub % char_;
        ua /= char_;
        ub /= char_;
    }
    Poly prod = poly_mul(pa, pb, char_);
    prod = poly_mod(prod, modulus_, char_);
    std::uint32_t out = 0;
    std::uint32_t mult = 1;
    for (std::size_t i = 0; i < prod.size() && i < deg_; ++i) {
        out += prod[i] * mult;
        mult *= char_;
    }
    return static_cast<Elem>(out);
}

void Field::build_tables() {
    neg_table_.resize(order_);
    for (std::uint32_t a = 0; a < order_; ++a) {
        // digit-wise negation mod char
        std::uint32_t out = 0, mult = 1, ua = a;
        for (std::uint32_t i = 0; i < deg_; ++i) {
            const std::uint32_t d = ua % char_;
            out += ((char_ - d) % char_) * mult;
            ua /= char_;
            mult *= char_;
        }
        neg_table_[a] = static_cast<Elem>(out);
    }

    if (order_ <= kTableOrder) {
        add_table_.resize(std::size_t(order_) * order_);
        mul_table_.resize(std::size_t(order_) * order_);
        for (std::uint32_t a = 0; a < order_; ++a) {
            for (std::uint32_t b = 0; b < order_; ++b) {
                add_table_[std::size_t(a) * order_ + b] =
                    add_direct(static_cast<Elem>(a), static_cast<Elem>(b));
                mul_table_[std::size_t(a) * order_ + b] =
                    mul_direct(static_cast<Elem>(a), static_cast<Elem>(b));
            }
        }
    }

    inv_table_.resize(order_, 0);
    for (std::uint32_t a = 1; a < order_; ++a) {
        // a^(order-2) inverts a in any finite field
        inv_table_[a] = pow(static_cast<Elem>(a), order_ - 2);
    }
}

Field::Elem Field::pow(Elem base, unsigned long long e) const {
    Elem result = one();
    Elem acc = base;
    while (e > 0) {
        if (e & 1ULL) result = mul(result, acc);
        acc = mul(acc, acc);
        e >>= 1ULL;
    }
    return result;
}

std::string Field::elem_str(Elem a) const {
    Poly p(deg_, 0);
    std::uint32_t ua = a;
    for (std::uint32_t i = 0; i < deg_; ++i) {
        p[i] = ua % char_;
        ua /= char_;
    }
    return poly_str(p);
}

}  // namespace mwrc

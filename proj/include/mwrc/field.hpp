#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwrc/errors.hpp"

namespace mwrc {

/// Arithmetic in GF(char^deg). An element packs the coefficient vector of its
/// residue polynomial as an integer in [0, order) using base-char digits, so
/// element 0 is the additive identity and element 1 the multiplicative one.
///
/// Addition and multiplication are table-backed up to kTableOrder and computed
/// directly (digit-wise / polynomial product with reduction) beyond that, so
/// inner simulation loops stay branch-free at desk scale. Instances are
/// immutable after construction and safe to share across threads.
class Field {
public:
    using Elem = std::uint16_t;
    static constexpr std::uint32_t kMaxOrder = 1u << 16;
    static constexpr std::uint32_t kTableOrder = 256;

    /// Builds GF(characteristic^degree). The modulus is a monic irreducible
    /// polynomial over Z_char given as coefficients from degree 0 upward
    /// (length degree+1). When omitted, the lexicographically smallest monic
    /// irreducible polynomial of that degree is selected, so equal parameters
    /// reproduce the same field everywhere.
    static Field make(std::uint32_t characteristic, std::uint32_t degree,
                      const std::optional<std::vector<std::uint32_t>>& modulus = std::nullopt);

    std::uint32_t characteristic() const { return char_; }
    std::uint32_t degree() const { return deg_; }
    std::uint32_t order() const { return order_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool valid(Elem a) const { return a < order_; }

    Elem add(Elem a, Elem b) const {
        assert(valid(a) && valid(b));
        if (!add_table_.empty()) return add_table_[std::size_t(a) * order_ + b];
        return add_direct(a, b);
    }

    Elem neg(Elem a) const {
        assert(valid(a));
        return neg_table_[a];
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        assert(valid(a) && valid(b));
        if (!mul_table_.empty()) return mul_table_[std::size_t(a) * order_ + b];
        return mul_direct(a, b);
    }

    /// Multiplicative inverse; throws ZeroInverseError for the additive identity.
    Elem inv(Elem a) const {
        assert(valid(a));
        if (a == 0) throw ZeroInverseError("no multiplicative inverse for the additive identity");
        return inv_table_[a];
    }

    Elem pow(Elem base, unsigned long long e) const;

    /// Element text like "0", "1", "x", "x+1" (for diagnostics).
    std::string elem_str(Elem a) const;

private:
    Field() = default;

    Elem add_direct(Elem a, Elem b) const;
    Elem mul_direct(Elem a, Elem b) const;
    void build_tables();

    std::uint32_t char_ = 0;
    std::uint32_t deg_ = 0;
    std::uint32_t order_ = 0;
    std::vector<std::uint32_t> modulus_;  // degree-0 coefficient first, monic
    std::vector<Elem> add_table_;
    std::vector<Elem> mul_table_;
    std::vector<Elem> neg_table_;
    std::vector<Elem> inv_table_;
};

bool is_prime_u32(std::uint32_t n);

/// The default modulus rule exposed for tests: lexicographically smallest
/// monic irreducible polynomial of the given degree over Z_char, comparing
/// coefficient vectors from the highest degree down.
std::vector<std::uint32_t> smallest_irreducible(std::uint32_t characteristic, std::uint32_t degree);

}  // namespace mwrc

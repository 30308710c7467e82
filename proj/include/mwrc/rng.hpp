#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace mwrc {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a stream seed from a master seed and up to three coordinates
/// (trial index, node index, purpose). Distinct coordinates give streams
/// that can run independently on different workers, and the same tuple
/// always reproduces the same stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (a * 0x9e3779b97f4a7c15ULL + 1));
    s = splitmix64(s ^ (b * 0xc2b2ae3d27d4eb4fULL + 2));
    s = splitmix64(s ^ (c * 0x165667b19e3779f9ULL + 3));
    return s;
}

/// Deterministic generator: mt19937_64 is fully specified by the standard,
/// and the helpers below avoid the implementation-defined std distributions,
/// so a seed produces the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, n), rejection-sampled so the draw is exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t k = (max % n + 1) % n;  // 2^64 mod n
        if (k == 0) return next_u64() % n;
        const std::uint64_t limit = 0ULL - k;  // 2^64 - k
        std::uint64_t r = next_u64();
        while (r >= limit) r = next_u64();
        return r % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double canonical() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

// Stream purposes used when deriving per-trial generators.
namespace stream {
constexpr std::uint64_t kCodes = 0x01;
constexpr std::uint64_t kMessages = 0x02;
constexpr std::uint64_t kRelayNoise = 0x03;
constexpr std::uint64_t kUserNoiseBase = 0x10;  // + user index (1-based)
}  // namespace stream

}  // namespace mwrc

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mwrc/code.hpp"
#include "mwrc/field.hpp"
#include "mwrc/prob.hpp"
#include "mwrc/rational.hpp"
#include "mwrc/rng.hpp"

namespace mwrc {

/// The channel: L users and a relay over one finite field. The uplink is the
/// gain-weighted field sum of all users' inputs plus relay noise; the
/// downlink is an independent gain-scaled channel per user.
struct MwrcConfig {
    Field field;
    std::vector<Field::Elem> uplink_gains;    // h_{i,0} for user i at index i-1
    std::vector<Field::Elem> downlink_gains;  // h_{0,i} for user i at index i-1
    std::vector<NoisePmf> noise;              // node 0 (relay) through node L

    int users() const { return static_cast<int>(uplink_gains.size()); }
    void validate() const;  // throws ConfigError
};

/// One uplink channel use: y0 = sum_i h_{i,0} x_i + N0.
Field::Elem uplink(const MwrcConfig& config, std::span<const Field::Elem> inputs, Rng& rng);

/// One downlink channel use seen by a single user: y_i = h_{0,i} x0 + N_i.
Field::Elem downlink(const MwrcConfig& config, int user, Field::Elem relay_input, Rng& rng);

/// All users' downlink outputs for one channel use, noise drawn per user from
/// the one generator (in user order).
std::vector<Field::Elem> downlink_all(const MwrcConfig& config, Field::Elem relay_input,
                                      Rng& rng);

/// Per-user rates in bits per channel use, kept as exact rationals.
struct RateAllocation {
    std::vector<Rational> rates;

    int users() const { return static_cast<int>(rates.size()); }
    Rational sum() const;
    Rational min() const;
    Rational min_complement() const;      // sum - min
    Rational complement(int user) const;  // sum - R_user  (0-based user)
    Rational excess(int user) const;      // R_user - min
    std::vector<int> split_set() const;   // users with positive excess, ascending
    void validate() const;
};

struct Subblock {
    enum class Kind { Pair, Solo };
    Kind kind;
    long long length;
    int first;   // Pair: lower of the two active users (0-based); Solo: the active user
    int second;  // Pair: first+1; Solo: -1
};

/// Uplink sub-block layout: (L-1) pair blocks then one solo block per
/// split user. Zero-length blocks are omitted; the rest sum to n.
struct SubblockSchedule {
    std::vector<Subblock> blocks;
    long long n = 0;
};

/// Smallest n for which every sub-block length is integral; valid
/// blocklengths are exactly its multiples.
long long minimal_valid_n(const RateAllocation& rates);

SubblockSchedule build_schedule(const RateAllocation& rates, long long n);

/// Everything derived from (channel, rates, n) before any trial runs: the
/// schedule, the segment count, per-message symbol sizes, and the candidate
/// space sizes the decoders will enumerate.
///
/// A block's payload is carried by `segments` equal-length codewords rather
/// than one (the block length divided evenly). Longer segments mean better
/// codes, so planning picks the smallest segment count whose candidate
/// spaces fit the enumeration budget; a fixed count can be forced instead.
struct FdfPlan {
    SubblockSchedule schedule;
    int segments = 1;
    long long pair_block_len = 0;       // per pair sub-block
    long long pair_seg_len = 0;
    long long downlink_seg_len = 0;
    int k_pair = 0;                     // symbols per common-part message per segment
    std::vector<int> split_users;       // ascending
    std::vector<int> k_solo;            // aligned with split_users
    std::vector<long long> solo_seg_len;  // aligned with split_users
    int k_tuple = 0;                    // function-tuple symbols per segment
    std::uint64_t budget = kDefaultDecodeBudget;

    int solo_slot(int user) const;      // index into split_users or -1
};

FdfPlan plan_fdf(const MwrcConfig& config, const RateAllocation& rates, long long n,
                 int segments = 0 /* 0 = auto */, std::uint64_t budget = kDefaultDecodeBudget);

/// Per-trial outcome. end_to_end_error() is the union of relay-side decode
/// failures and wrong message recovery at any user.
struct TrialReport {
    std::vector<std::uint8_t> relay_ok;   // one flag per decoded segment, schedule order
    std::vector<std::uint8_t> user_ok;    // per user: decoded the full broadcast right
    std::vector<std::uint8_t> peer_ok;    // users x users row-major; diagonal fixed to 1
    int users = 0;

    bool relay_clean() const;
    bool recovery_clean() const;
    bool end_to_end_error() const { return !relay_clean() || !recovery_clean(); }
};

TrialReport run_fdf_trial(const MwrcConfig& config, const RateAllocation& rates,
                          const FdfPlan& plan, std::uint64_t master_seed,
                          std::uint64_t trial_index);

/// Convenience form planning with defaults, per the library's entry contract.
TrialReport run_fdf_trial(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          std::uint64_t seed);

/// Aggregate over independent trials with a 95% Wilson interval on the
/// end-to-end error rate. Relay and user failures are accounted separately;
/// user_err conditions on the relay having decoded everything.
struct BatchResult {
    long long trials = 0;
    long long e2e_errors = 0;
    long long relay_error_trials = 0;
    long long relay_clean_trials = 0;
    long long user_error_trials = 0;  // among relay-clean trials

    double p_e() const;
    double ci_low() const;
    double ci_high() const;
    double relay_err() const;
    double user_err() const;
};

BatchResult run_fdf_batch(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          int segments, std::uint64_t budget, long long trials,
                          std::uint64_t master_seed, int threads = 1);

/// Joint-decoding baseline for the two-user binary case: the relay decodes
/// both messages from the multiple-access uplink, broadcasts the pair, and
/// each user decodes with its own message pinned as side information.
struct CdfPlan {
    int segments = 1;
    long long seg_len = 0;
    int k_user1 = 0;
    int k_user2 = 0;
    std::uint64_t budget = kDefaultDecodeBudget;
};

CdfPlan plan_cdf(const MwrcConfig& config, const RateAllocation& rates, long long n,
                 int segments = 0, std::uint64_t budget = kDefaultDecodeBudget);

TrialReport run_cdf_trial(const MwrcConfig& config, const RateAllocation& rates,
                          const CdfPlan& plan, std::uint64_t master_seed,
                          std::uint64_t trial_index);

TrialReport run_cdf_trial(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          std::uint64_t seed);

BatchResult run_cdf_batch(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          int segments, std::uint64_t budget, long long trials,
                          std::uint64_t master_seed, int threads = 1);

/// Recovers every user's common-part vector from the pairwise function values
/// S(A_{l,l+1}) = h_l A_l + h_{l+1} A_{l+1}, sweeping forward from the
/// caller's own vector up to user L and then backward down to user 1.
std::vector<std::vector<Field::Elem>> chain_decode(
    const Field& field, std::span<const Field::Elem> uplink_gains,
    const std::vector<std::vector<Field::Elem>>& pair_values, int own_index,
    std::span<const Field::Elem> own_value);

}  // namespace mwrc

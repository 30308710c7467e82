#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mwrc/errors.hpp"
#include "mwrc/field.hpp"
#include "mwrc/prob.hpp"
#include "mwrc/rng.hpp"

namespace mwrc {

constexpr std::uint64_t kDefaultDecodeBudget = 1ULL << 20;

/// Number of messages |F|^k; throws when it does not fit the budget guard's
/// 64-bit accounting.
std::uint64_t message_space(const Field& field, int k);

/// Base-|F| digit expansion of w, least-significant digit first.
/// Throws MessageTooLargeError when w >= |F|^k.
std::vector<Field::Elem> index_to_symbols(const Field& field, std::uint64_t w, int k);

/// Inverse of index_to_symbols; exact round trip.
std::uint64_t symbols_to_index(const Field& field, std::span<const Field::Elem> symbols);

/// Random linear code x = (s G) + q over a field, with the generator matrix
/// and dither drawn i.i.d. uniform by sample(). The field reference must
/// outlive the code.
class LinearCode {
public:
    LinearCode(const Field& field, int k, int n, std::vector<Field::Elem> gen,
               std::vector<Field::Elem> dither);

    static LinearCode sample(const Field& field, int k, int n, Rng& rng);

    const Field& field() const { return *field_; }
    int k() const { return k_; }
    int n() const { return n_; }
    std::span<const Field::Elem> row(int i) const {
        return {gen_.data() + std::size_t(i) * n_, std::size_t(n_)};
    }
    std::span<const Field::Elem> dither() const { return dither_; }

    std::vector<Field::Elem> encode(std::span<const Field::Elem> msg) const;
    void encode_into(std::span<const Field::Elem> msg, std::span<Field::Elem> out) const;

private:
    const Field* field_;
    int k_;
    int n_;
    std::vector<Field::Elem> gen_;  // row-major k x n
    std::vector<Field::Elem> dither_;
};

/// Candidate messages for ML decoding: the base message with the listed
/// symbol positions free to range over the whole field. free = {0..k-1} with
/// base 0 spans all of F^k; an empty free list pins the single base message.
struct CandidateSet {
    std::uint64_t base = 0;
    std::vector<int> free_positions;  // strictly increasing

    static CandidateSet all(int k);
    std::uint64_t size(const Field& field) const;
};

/// Exact maximum-likelihood decoding: returns the message index maximizing
/// prod_t p_noise(y_t - encode(s)_t) over the candidate set, ties broken by
/// the smallest message index. Throws BudgetExceededError when the candidate
/// count exceeds the budget.
std::uint64_t ml_decode(const LinearCode& code, std::span<const Field::Elem> received,
                        const NoisePmf& noise, const CandidateSet& candidates,
                        std::uint64_t budget = kDefaultDecodeBudget);

/// Same decision rule over an explicit message subset (any order); throws
/// EmptyCandidatesError when the subset is empty.
std::uint64_t ml_decode_explicit(const LinearCode& code, std::span<const Field::Elem> received,
                                 const NoisePmf& noise,
                                 std::span<const std::uint64_t> candidates,
                                 std::uint64_t budget = kDefaultDecodeBudget);

/// Counts, over every (G, q) assignment, how many map message s1 to codeword
/// x1. Exhaustive; meant for the small ensemble-exactness checks.
std::uint64_t ensemble_count_single(const Field& field, int k, int n,
                                    std::span<const Field::Elem> s1,
                                    std::span<const Field::Elem> x1);

/// Joint count: assignments mapping s1 -> x1 and s2 -> x2 simultaneously.
std::uint64_t ensemble_count_pair(const Field& field, int k, int n,
                                  std::span<const Field::Elem> s1,
                                  std::span<const Field::Elem> x1,
                                  std::span<const Field::Elem> s2,
                                  std::span<const Field::Elem> x2);

/// Total number of (G, q) assignments, |F|^{n(k+1)}.
std::uint64_t ensemble_total(const Field& field, int k, int n);

/// Smallest k such that k * parts * log2|F| >= bits. Exact for
/// characteristic-2 fields; long-double comparison elsewhere (equality can
/// only occur in the characteristic-2 case).
int min_symbols_for_bits(const Field& field, long long bits_num, long long bits_den, int parts);

/// Gaussian elimination over the field; true when the k x n matrix has rank k,
/// i.e. the code maps distinct messages to distinct codewords.
bool full_row_rank(const Field& field, std::span<const Field::Elem> gen, int k, int n);

}  // namespace mwrc

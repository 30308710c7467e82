#include "mwrc/code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace mwrc {

std::uint64_t message_space(const Field& field, int k) {
    std::uint64_t space = 1;
    for (int i = 0; i < k; ++i) {
        if (space > std::numeric_limits<std::uint64_t>::max() / field.order()) {
            throw BudgetExceededError("message space |F|^" + std::to_string(k) +
                                      " does not fit 64 bits");
        }
        space *= field.order();
    }
    return space;
}

std::vector<Field::Elem> index_to_symbols(const Field& field, std::uint64_t w, int k) {
    const std::uint64_t space = message_space(field, k);
    if (w >= space) {
        throw MessageTooLargeError("message index " + std::to_string(w) +
                                   " outside [0, |F|^" + std::to_string(k) + ")");
    }
    std::vector<Field::Elem> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out[std::size_t(i)] = static_cast<Field::Elem>(w % field.order());
        w /= field.order();
    }
    return out;
}

std::uint64_t symbols_to_index(const Field& field, std::span<const Field::Elem> symbols) {
    std::uint64_t w = 0;
    for (std::size_t i = symbols.size(); i-- > 0;) {
        w = w * field.order() + symbols[i];
    }
    return w;
}

LinearCode::LinearCode(const Field& field, int k, int n, std::vector<Field::Elem> gen,
                       std::vector<Field::Elem> dither)
    : field_(&field), k_(k), n_(n), gen_(std::move(gen)), dither_(std::move(dither)) {
    if (k < 0 || n < 1 || k > n) {
        throw BadDimensionsError("linear code needs 0 <= k <= n, got k=" + std::to_string(k) +
                                 " n=" + std::to_string(n));
    }
    if (gen_.size() != std::size_t(k) * std::size_t(n) || dither_.size() != std::size_t(n)) {
        throw BadDimensionsError("generator or dither size does not match k x n");
    }
    for (Field::Elem e : gen_) {
        if (!field.valid(e)) throw BadDimensionsError("generator entry outside the field");
    }
    for (Field::Elem e : dither_) {
        if (!field.valid(e)) throw BadDimensionsError("dither entry outside the field");
    }
}

LinearCode LinearCode::sample(const Field& field, int k, int n, Rng& rng) {
    if (k < 1 || n < 1 || k > n) {
        throw BadDimensionsError("sample_code needs 1 <= k <= n, got k=" + std::to_string(k) +
                                 " n=" + std::to_string(n));
    }
    std::vector<Field::Elem> gen(static_cast<std::size_t>(k) * std::size_t(n));
    std::vector<Field::Elem> dither(static_cast<std::size_t>(n));
    for (auto& e : gen) e = static_cast<Field::Elem>(rng.below(field.order()));
    for (auto& e : dither) e = static_cast<Field::Elem>(rng.below(field.order()));
    return LinearCode(field, k, n, std::move(gen), std::move(dither));
}

std::vector<Field::Elem> LinearCode::encode(std::span<const Field::Elem> msg) const {
    std::vector<Field::Elem> out(static_cast<std::size_t>(n_));
    encode_into(msg, out);
    return out;
}

void LinearCode::encode_into(std::span<const Field::Elem> msg,
                             std::span<Field::Elem> out) const {
    if (msg.size() != std::size_t(k_)) {
        throw LengthMismatchError("message length " + std::to_string(msg.size()) +
                                  " does not match k=" + std::to_string(k_));
    }
    const Field& f = *field_;
    std::copy(dither_.begin(), dither_.end(), out.begin());
    for (int i = 0; i < k_; ++i) {
        const Field::Elem s = msg[std::size_t(i)];
        if (s == 0) continue;
        const Field::Elem* g = gen_.data() + std::size_t(i) * n_;
        for (int t = 0; t < n_; ++t) {
            out[std::size_t(t)] = f.add(out[std::size_t(t)], f.mul(s, g[t]));
        }
    }
}

CandidateSet CandidateSet::all(int k) {
    CandidateSet c;
    c.free_positions.resize(std::size_t(k));
    std::iota(c.free_positions.begin(), c.free_positions.end(), 0);
    return c;
}

std::uint64_t CandidateSet::size(const Field& field) const {
    return message_space(field, static_cast<int>(free_positions.size()));
}

namespace {

// Digits of the base message with the free positions zeroed; candidate
// messages are built by filling the free digits back in.
std::vector<Field::Elem> base_digits(const LinearCode& code, const CandidateSet& cand) {
    auto digits = index_to_symbols(code.field(), cand.base, code.k());
    for (int pos : cand.free_positions) {
        if (pos < 0 || pos >= code.k()) {
            throw BadDimensionsError("candidate free position outside the message");
        }
        digits[std::size_t(pos)] = 0;
    }
    return digits;
}

std::uint64_t pack_index(const Field& field, std::span<const Field::Elem> digits) {
    return symbols_to_index(field, digits);
}

// Generic exact ML: odometer over the free digits, fresh incremental updates
// of the running codeword (one changed digit per odometer step, plus carries).
std::uint64_t ml_generic(const LinearCode& code, std::span<const Field::Elem> received,
                         const NoisePmf& noise, const CandidateSet& cand) {
    const Field& f = code.field();
    const int n = code.n();
    const double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<double> logp(f.order());
    for (std::size_t e = 0; e < f.order(); ++e) {
        logp[e] = noise[e] > 0.0 ? std::log(noise[e]) : kNegInf;
    }

    // Fold the dither into the received word: score against s*G directly.
    std::vector<Field::Elem> target(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        target[std::size_t(t)] = f.sub(received[std::size_t(t)], code.dither()[std::size_t(t)]);
    }

    std::vector<Field::Elem> digits = base_digits(code, cand);
    std::vector<Field::Elem> word(std::size_t(n), 0);
    {
        // codeword of the base message, dither excluded
        for (int i = 0; i < code.k(); ++i) {
            const Field::Elem s = digits[std::size_t(i)];
            if (s == 0) continue;
            auto g = code.row(i);
            for (int t = 0; t < n; ++t) word[std::size_t(t)] = f.add(word[std::size_t(t)], f.mul(s, g[std::size_t(t)]));
        }
    }

    auto score_word = [&]() {
        double s = 0.0;
        for (int t = 0; t < n; ++t) {
            s += logp[f.sub(target[std::size_t(t)], word[std::size_t(t)])];
        }
        return s;
    };

    const int nfree = static_cast<int>(cand.free_positions.size());
    std::uint64_t best_msg = pack_index(f, digits);
    double best_score = score_word();

    std::vector<std::uint32_t> odo(std::size_t(nfree), 0);
    while (true) {
        // advance the odometer (least-significant free digit first)
        int j = 0;
        for (; j < nfree; ++j) {
            const int pos = cand.free_positions[std::size_t(j)];
            const Field::Elem old = digits[std::size_t(pos)];
            if (odo[std::size_t(j)] + 1 < f.order()) {
                ++odo[std::size_t(j)];
                const auto next = static_cast<Field::Elem>(old + 1);
                digits[std::size_t(pos)] = next;
                const Field::Elem delta = f.sub(next, old);
                auto g = code.row(pos);
                for (int t = 0; t < n; ++t) {
                    word[std::size_t(t)] = f.add(word[std::size_t(t)], f.mul(delta, g[std::size_t(t)]));
                }
                break;
            }
            odo[std::size_t(j)] = 0;
            digits[std::size_t(pos)] = 0;
            const Field::Elem delta = f.sub(0, old);
            auto g = code.row(pos);
            for (int t = 0; t < n; ++t) {
                word[std::size_t(t)] = f.add(word[std::size_t(t)], f.mul(delta, g[std::size_t(t)]));
            }
        }
        if (j == nfree) break;

        const double s = score_word();
        const std::uint64_t msg = pack_index(f, digits);
        if (s > best_score || (s == best_score && msg < best_msg)) {
            best_score = s;
            best_msg = msg;
        }
    }
    return best_msg;
}

// Scatters the Gray-coded free bits into their message positions. Binary
// fields only, where each symbol position is one bit of the message index.
std::uint64_t message_from_gray(std::uint64_t gray, const CandidateSet& cand,
                                std::uint64_t base_msg) {
    std::uint64_t msg = base_msg;
    std::uint64_t g = gray;
    while (g != 0) {
        const int j = std::countr_zero(g);
        g &= g - 1;
        msg |= 1ULL << cand.free_positions[std::size_t(j)];
    }
    return msg;
}

// GF(2) fast path: bit-packed codewords, Gray-code enumeration of the free
// bits, one XOR + popcount per candidate. Decision rule identical to the
// generic path because on a binary symmetric channel the likelihood is
// monotone in the Hamming distance.
std::uint64_t ml_binary(const LinearCode& code, std::span<const Field::Elem> received,
                        const NoisePmf& noise, const CandidateSet& cand) {
    const int n = code.n();
    const int words = (n + 63) / 64;
    const double rho = noise[1];

    auto pack = [&](std::span<const Field::Elem> bits, std::vector<std::uint64_t>& out) {
        out.assign(std::size_t(words), 0);
        for (int t = 0; t < n; ++t) {
            if (bits[std::size_t(t)]) out[std::size_t(t >> 6)] |= 1ULL << (t & 63);
        }
    };

    std::vector<Field::Elem> digits = base_digits(code, cand);
    const std::uint64_t base_msg = pack_index(code.field(), digits);
    if (rho == 0.5) return base_msg;  // all candidates tie; smallest index wins

    std::vector<std::uint64_t> target(std::size_t(words), 0);
    {
        std::vector<Field::Elem> folded(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            folded[std::size_t(t)] =
                code.field().sub(received[std::size_t(t)], code.dither()[std::size_t(t)]);
        }
        pack(folded, target);
    }

    const int nfree = static_cast<int>(cand.free_positions.size());
    std::vector<std::vector<std::uint64_t>> rows(static_cast<std::size_t>(nfree));
    for (int j = 0; j < nfree; ++j) {
        pack(code.row(cand.free_positions[std::size_t(j)]), rows[std::size_t(j)]);
    }

    std::vector<std::uint64_t> word(std::size_t(words), 0);
    {
        std::vector<Field::Elem> base_word(std::size_t(n), 0);
        for (int i = 0; i < code.k(); ++i) {
            if (digits[std::size_t(i)] == 0) continue;
            auto g = code.row(i);
            for (int t = 0; t < n; ++t) {
                base_word[std::size_t(t)] = static_cast<Field::Elem>(base_word[std::size_t(t)] ^ g[std::size_t(t)]);
            }
        }
        pack(base_word, word);
    }

    auto distance = [&]() {
        int d = 0;
        for (int w = 0; w < words; ++w) {
            d += std::popcount(word[std::size_t(w)] ^ target[std::size_t(w)]);
        }
        return d;
    };

    // rho < 1/2: likelihood decreases with distance; rho > 1/2: increases.
    const bool minimize = rho < 0.5;
    int best_d = distance();
    std::uint64_t best_msg = base_msg;
    std::uint64_t gray = 0;

    const std::uint64_t count = 1ULL << nfree;
    for (std::uint64_t i = 1; i < count; ++i) {
        const int flip = std::countr_zero(i);
        gray ^= 1ULL << flip;
        const auto& r = rows[std::size_t(flip)];
        for (int w = 0; w < words; ++w) word[std::size_t(w)] ^= r[std::size_t(w)];

        const int d = distance();
        if ((minimize && d < best_d) || (!minimize && d > best_d)) {
            best_d = d;
            best_msg = message_from_gray(gray, cand, base_msg);
        } else if (d == best_d) {
            const std::uint64_t msg = message_from_gray(gray, cand, base_msg);
            if (msg < best_msg) best_msg = msg;
        }
    }

    // Degenerate crossover: candidates that are not an exact (anti-)match
    // all have probability zero and tie at the smallest index.
    if (rho == 0.0 && best_d != 0) return base_msg;
    if (rho == 1.0 && best_d != n) return base_msg;
    return best_msg;
}

}  // namespace

std::uint64_t ml_decode(const LinearCode& code, std::span<const Field::Elem> received,
                        const NoisePmf& noise, const CandidateSet& cand, std::uint64_t budget) {
    if (received.size() != std::size_t(code.n())) {
        throw LengthMismatchError("received word length does not match the code");
    }
    if (noise.order() != code.field().order()) {
        throw InvalidPmfError("noise pmf does not match the code's field");
    }
    const std::uint64_t count = cand.size(code.field());
    if (count > budget) {
        throw BudgetExceededError("candidate count " + std::to_string(count) +
                                  " exceeds the enumeration budget " + std::to_string(budget));
    }
    if (code.field().order() == 2) {
        return ml_binary(code, received, noise, cand);
    }
    return ml_generic(code, received, noise, cand);
}

std::uint64_t ml_decode_explicit(const LinearCode& code, std::span<const Field::Elem> received,
                                 const NoisePmf& noise,
                                 std::span<const std::uint64_t> candidates,
                                 std::uint64_t budget) {
    if (candidates.empty()) throw EmptyCandidatesError("empty candidate subset");
    if (candidates.size() > budget) {
        throw BudgetExceededError("candidate count " + std::to_string(candidates.size()) +
                                  " exceeds the enumeration budget " + std::to_string(budget));
    }
    if (received.size() != std::size_t(code.n())) {
        throw LengthMismatchError("received word length does not match the code");
    }
    const Field& f = code.field();
    const double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> logp(f.order());
    for (std::size_t e = 0; e < f.order(); ++e) {
        logp[e] = noise[e] > 0.0 ? std::log(noise[e]) : kNegInf;
    }

    double best_score = kNegInf;
    bool have_best = false;
    std::uint64_t best_msg = 0;
    std::vector<Field::Elem> word(static_cast<std::size_t>(code.n()));
    for (std::uint64_t w : candidates) {
        const auto msg = index_to_symbols(f, w, code.k());
        code.encode_into(msg, word);
        double s = 0.0;
        for (int t = 0; t < code.n(); ++t) {
            s += logp[f.sub(received[std::size_t(t)], word[std::size_t(t)])];
        }
        if (!have_best || s > best_score || (s == best_score && w < best_msg)) {
            have_best = true;
            best_score = s;
            best_msg = w;
        }
    }
    return best_msg;
}

namespace {

// Iterates every assignment of `cells` field elements.
template <typename Fn>
void for_all_assignments(const Field& f, int cells, Fn&& fn) {
    std::vector<Field::Elem> a(std::size_t(cells), 0);
    while (true) {
        fn(std::span<const Field::Elem>(a));
        int j = 0;
        for (; j < cells; ++j) {
            if (a[std::size_t(j)] + 1u < f.order()) {
                ++a[std::size_t(j)];
                break;
            }
            a[std::size_t(j)] = 0;
        }
        if (j == cells) break;
    }
}

}  // namespace

std::uint64_t ensemble_total(const Field& field, int k, int n) {
    std::uint64_t total = 1;
    for (int i = 0; i < n * (k + 1); ++i) {
        if (total > std::numeric_limits<std::uint64_t>::max() / field.order()) {
            throw BudgetExceededError("ensemble too large to enumerate");
        }
        total *= field.order();
    }
    return total;
}

std::uint64_t ensemble_count_single(const Field& field, int k, int n,
                                    std::span<const Field::Elem> s1,
                                    std::span<const Field::Elem> x1) {
    std::uint64_t hits = 0;
    for_all_assignments(field, n * (k + 1), [&](std::span<const Field::Elem> cells) {
        // first k*n cells are G row-major, last n cells are q
        LinearCode code(field, k, n,
                        std::vector<Field::Elem>(cells.begin(), cells.begin() + std::size_t(k) * n),
                        std::vector<Field::Elem>(cells.end() - n, cells.end()));
        const auto w = code.encode(s1);
        if (std::equal(w.begin(), w.end(), x1.begin())) ++hits;
    });
    return hits;
}

std::uint64_t ensemble_count_pair(const Field& field, int k, int n,
                                  std::span<const Field::Elem> s1,
                                  std::span<const Field::Elem> x1,
                                  std::span<const Field::Elem> s2,
                                  std::span<const Field::Elem> x2) {
    std::uint64_t hits = 0;
    for_all_assignments(field, n * (k + 1), [&](std::span<const Field::Elem> cells) {
        LinearCode code(field, k, n,
                        std::vector<Field::Elem>(cells.begin(), cells.begin() + std::size_t(k) * n),
                        std::vector<Field::Elem>(cells.end() - n, cells.end()));
        const auto w1 = code.encode(s1);
        if (!std::equal(w1.begin(), w1.end(), x1.begin())) return;
        const auto w2 = code.encode(s2);
        if (std::equal(w2.begin(), w2.end(), x2.begin())) ++hits;
    });
    return hits;
}

bool full_row_rank(const Field& field, std::span<const Field::Elem> gen, int k, int n) {
    if (k == 0) return true;
    if (k > n) return false;
    std::vector<Field::Elem> m(gen.begin(), gen.end());
    auto at = [&](int r, int c) -> Field::Elem& { return m[std::size_t(r) * n + std::size_t(c)]; };
    int rank = 0;
    for (int col = 0; col < n && rank < k; ++col) {
        int pivot = -1;
        for (int r = rank; r < k; ++r) {
            if (at(r, col) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        for (int c = col; c < n; ++c) std::swap(at(pivot, c), at(rank, c));
        const Field::Elem inv = field.inv(at(rank, col));
        for (int r = rank + 1; r < k; ++r) {
            const Field::Elem factor = field.mul(at(r, col), inv);
            if (factor == 0) continue;
            for (int c = col; c < n; ++c) {
                at(r, c) = field.sub(at(r, c), field.mul(factor, at(rank, c)));
            }
        }
        ++rank;
    }
    return rank == k;
}

int min_symbols_for_bits(const Field& field, long long bits_num, long long bits_den, int parts) {
    if (bits_num == 0) return 0;
    if (bits_num < 0 || bits_den <= 0 || parts <= 0) {
        throw BadDimensionsError("invalid bit budget for symbol sizing");
    }
    if (field.characteristic() == 2) {
        // k * parts * deg >= bits  with everything integral
        const long long denom = bits_den * static_cast<long long>(parts) *
                                static_cast<long long>(field.degree());
        return static_cast<int>((bits_num + denom - 1) / denom);
    }
    // Smallest k with 2^{bits/parts} <= |F|^k; the sides are never equal for
    // odd characteristic, so a long-double comparison decides safely.
    const long double lhs = static_cast<long double>(bits_num) * 0.69314718055994530942L;
    int k = 1;
    while (true) {
        const long double rhs = static_cast<long double>(k) * parts * bits_den *
                                std::log(static_cast<long double>(field.order()));
        if (rhs > lhs) return k;
        ++k;
        if (k > 4096) throw BadDimensionsError("symbol sizing did not converge");
    }
}

}  // namespace mwrc

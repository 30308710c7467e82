#include "mwrc/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <thread>

namespace mwrc {

void MwrcConfig::validate() const {
    const int L = users();
    if (L < 2) throw ConfigError("need at least two users");
    if (downlink_gains.size() != std::size_t(L)) {
        throw ConfigError("uplink and downlink gain counts differ");
    }
    for (int i = 0; i < L; ++i) {
        if (!field.valid(uplink_gains[std::size_t(i)]) || uplink_gains[std::size_t(i)] == 0) {
            throw ConfigError("uplink gain of user " + std::to_string(i + 1) +
                              " must be a nonzero field element");
        }
        if (!field.valid(downlink_gains[std::size_t(i)]) || downlink_gains[std::size_t(i)] == 0) {
            throw ConfigError("downlink gain of user " + std::to_string(i + 1) +
                              " must be a nonzero field element");
        }
    }
    if (noise.size() != std::size_t(L) + 1) {
        throw ConfigError("need one noise pmf per node 0.." + std::to_string(L));
    }
    for (const NoisePmf& pmf : noise) {
        if (pmf.order() != field.order()) {
            throw ConfigError("noise pmf size does not match the field order");
        }
    }
}

Field::Elem uplink(const MwrcConfig& config, std::span<const Field::Elem> inputs, Rng& rng) {
    const Field& f = config.field;
    Field::Elem acc = f.zero();
    for (int i = 0; i < config.users(); ++i) {
        acc = f.add(acc, f.mul(config.uplink_gains[std::size_t(i)], inputs[std::size_t(i)]));
    }
    return f.add(acc, sample(config.noise[0], rng));
}

Field::Elem downlink(const MwrcConfig& config, int user, Field::Elem relay_input, Rng& rng) {
    const Field& f = config.field;
    const Field::Elem signal = f.mul(config.downlink_gains[std::size_t(user)], relay_input);
    return f.add(signal, sample(config.noise[std::size_t(user) + 1], rng));
}

std::vector<Field::Elem> downlink_all(const MwrcConfig& config, Field::Elem relay_input,
                                      Rng& rng) {
    std::vector<Field::Elem> out(static_cast<std::size_t>(config.users()));
    for (int i = 0; i < config.users(); ++i) out[std::size_t(i)] = downlink(config, i, relay_input, rng);
    return out;
}

Rational RateAllocation::sum() const {
    Rational s;
    for (const Rational& r : rates) s = s + r;
    return s;
}

Rational RateAllocation::min() const {
    Rational m = rates.at(0);
    for (const Rational& r : rates) {
        if (r < m) m = r;
    }
    return m;
}

Rational RateAllocation::min_complement() const { return sum() - min(); }

Rational RateAllocation::complement(int user) const { return sum() - rates.at(std::size_t(user)); }

Rational RateAllocation::excess(int user) const { return rates.at(std::size_t(user)) - min(); }

std::vector<int> RateAllocation::split_set() const {
    std::vector<int> out;
    for (int i = 0; i < users(); ++i) {
        if (excess(i) > Rational(0)) out.push_back(i);
    }
    return out;
}

void RateAllocation::validate() const {
    if (rates.size() < 2) throw ConfigError("need a rate per user, at least two users");
    for (const Rational& r : rates) {
        if (r < Rational(0)) throw ConfigError("rates must be non-negative");
    }
}

long long minimal_valid_n(const RateAllocation& rates) {
    rates.validate();
    const Rational rminc = rates.min_complement();
    if (rminc == Rational(0)) throw ConfigError("all rates are zero");
    long long n0 = 1;
    const Rational rmin = rates.min();
    if (rmin > Rational(0)) n0 = lcm_checked(n0, (rmin / rminc).den());
    for (int d : rates.split_set()) {
        n0 = lcm_checked(n0, (rates.excess(d) / rminc).den());
    }
    return n0;
}

SubblockSchedule build_schedule(const RateAllocation& rates, long long n) {
    const long long n0 = minimal_valid_n(rates);
    if (n < 1 || n % n0 != 0) {
        throw IndivisibleBlocklengthError(
            "blocklength " + std::to_string(n) + " does not give integral sub-block lengths; " +
                "valid blocklengths are multiples of " + std::to_string(n0),
            n0);
    }
    const Rational rminc = rates.min_complement();
    const Rational rmin = rates.min();
    const int L = rates.users();

    SubblockSchedule sched;
    sched.n = n;
    long long total = 0;
    if (rmin > Rational(0)) {
        const Rational len = Rational(n) * rmin / rminc;
        assert(len.is_integer());
        for (int l = 0; l + 1 < L; ++l) {
            sched.blocks.push_back({Subblock::Kind::Pair, len.num(), l, l + 1});
            total += len.num();
        }
    }
    for (int d : rates.split_set()) {
        const Rational len = Rational(n) * rates.excess(d) / rminc;
        assert(len.is_integer());
        sched.blocks.push_back({Subblock::Kind::Solo, len.num(), d, -1});
        total += len.num();
    }
    assert(total == n);
    return sched;
}

int FdfPlan::solo_slot(int user) const {
    for (std::size_t j = 0; j < split_users.size(); ++j) {
        if (split_users[j] == user) return static_cast<int>(j);
    }
    return -1;
}

namespace {

bool space_fits(const Field& field, int k, std::uint64_t budget) {
    const double bits = k * std::log2(static_cast<double>(field.order()));
    return bits <= std::log2(static_cast<double>(budget)) + 1e-9;
}

int symbols_for(const Field& field, const Rational& bits, int segments) {
    return min_symbols_for_bits(field, bits.num(), bits.den(), segments);
}

}  // namespace

FdfPlan plan_fdf(const MwrcConfig& config, const RateAllocation& rates, long long n,
                 int segments, std::uint64_t budget) {
    config.validate();
    rates.validate();
    if (rates.users() != config.users()) {
        throw ConfigError("rate count does not match the user count");
    }

    FdfPlan plan;
    plan.budget = budget;
    plan.schedule = build_schedule(rates, n);
    plan.split_users = rates.split_set();

    const Field& f = config.field;
    const int L = config.users();
    const Rational rmin = rates.min();

    for (const Subblock& b : plan.schedule.blocks) {
        if (b.kind == Subblock::Kind::Pair) plan.pair_block_len = b.length;
    }

    long long max_segments = n;
    for (const Subblock& b : plan.schedule.blocks) max_segments = std::min(max_segments, b.length);

    auto try_segments = [&](int ns, std::string* why) -> bool {
        if (n % ns != 0) {
            if (why) *why = "segment count does not divide the blocklength";
            return false;
        }
        for (const Subblock& b : plan.schedule.blocks) {
            if (b.length % ns != 0) {
                if (why) *why = "segment count does not divide every sub-block";
                return false;
            }
        }
        const int k_pair = rmin > Rational(0) ? symbols_for(f, Rational(n) * rmin, ns) : 0;
        int k_tuple = (L - 1) * k_pair;
        std::vector<int> k_solo;
        for (int d : plan.split_users) {
            k_solo.push_back(symbols_for(f, Rational(n) * rates.excess(d), ns));
            k_tuple += k_solo.back();
        }
        if (!space_fits(f, k_tuple, budget)) {
            if (why) {
                *why = "function tuple space |F|^" + std::to_string(k_tuple) +
                       " exceeds the enumeration budget " + std::to_string(budget);
            }
            return false;
        }
        // Code dimensions must fit their segments; more segments only make
        // this worse, so a failure here is a rate problem, not a budget one.
        const long long pair_seg = plan.pair_block_len / ns;
        if (k_pair > 0 && k_pair > pair_seg) {
            throw ConfigError("common-part rate too high: needs " + std::to_string(k_pair) +
                              " symbols in segments of " + std::to_string(pair_seg));
        }
        std::vector<long long> solo_seg;
        std::size_t slot = 0;
        for (const Subblock& b : plan.schedule.blocks) {
            if (b.kind != Subblock::Kind::Solo) continue;
            const long long seg = b.length / ns;
            if (k_solo[slot] > seg) {
                throw ConfigError("excess rate of user " + std::to_string(b.first + 1) +
                                  " too high for its sub-block");
            }
            solo_seg.push_back(seg);
            ++slot;
        }
        if (k_tuple > n / ns) {
            throw ConfigError("function tuple needs " + std::to_string(k_tuple) +
                              " symbols but downlink segments have only " +
                              std::to_string(n / ns));
        }
        plan.segments = ns;
        plan.pair_seg_len = rmin > Rational(0) ? pair_seg : 0;
        plan.downlink_seg_len = n / ns;
        plan.k_pair = k_pair;
        plan.k_solo = std::move(k_solo);
        plan.solo_seg_len = std::move(solo_seg);
        plan.k_tuple = k_tuple;
        return true;
    };

    if (segments > 0) {
        std::string why;
        if (!try_segments(segments, &why)) {
            if (why.find("budget") != std::string::npos) throw BudgetExceededError(why);
            throw ConfigError("segment count " + std::to_string(segments) + " rejected: " + why);
        }
        return plan;
    }

    std::string last_why;
    for (long long ns = 1; ns <= max_segments; ++ns) {
        if (try_segments(static_cast<int>(ns), &last_why)) return plan;
    }
    throw BudgetExceededError("no admissible segment count for n=" + std::to_string(n) + ": " +
                              last_why);
}

bool TrialReport::relay_clean() const {
    return std::all_of(relay_ok.begin(), relay_ok.end(), [](std::uint8_t v) { return v != 0; });
}

bool TrialReport::recovery_clean() const {
    return std::all_of(peer_ok.begin(), peer_ok.end(), [](std::uint8_t v) { return v != 0; });
}

namespace {

std::vector<Field::Elem> random_symbols(const Field& f, int k, Rng& rng) {
    std::vector<Field::Elem> out(static_cast<std::size_t>(k));
    for (auto& e : out) e = static_cast<Field::Elem>(rng.below(f.order()));
    return out;
}

std::vector<Field::Elem> random_entries(const Field& f, std::size_t count, Rng& rng) {
    std::vector<Field::Elem> out(count);
    for (auto& e : out) e = static_cast<Field::Elem>(rng.below(f.order()));
    return out;
}

// Trial generators are conditioned on full row rank so that distinct
// messages never collide: with zero noise exact ML then recovers every
// message, and the conditioning removes only a |F|^(k-n-1)-sized sliver of
// the ensemble at operating sizes.
std::vector<Field::Elem> random_injective_gen(const Field& f, int k, long long n, Rng& rng) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        auto gen = random_entries(f, std::size_t(k) * std::size_t(n), rng);
        if (full_row_rank(f, gen, k, static_cast<int>(n))) return gen;
    }
    throw Error("generator sampling failed to reach full rank");
}

}  // namespace

std::vector<std::vector<Field::Elem>> chain_decode(
    const Field& field, std::span<const Field::Elem> uplink_gains,
    const std::vector<std::vector<Field::Elem>>& pair_values, int own_index,
    std::span<const Field::Elem> own_value) {
    const int L = static_cast<int>(uplink_gains.size());
    if (static_cast<int>(pair_values.size()) != L - 1) {
        throw LengthMismatchError("need one pair value per adjacent user pair");
    }
    std::vector<std::vector<Field::Elem>> known(static_cast<std::size_t>(L));
    known[std::size_t(own_index)].assign(own_value.begin(), own_value.end());
    const std::size_t k = own_value.size();

    auto solve = [&](int target, int other, const std::vector<Field::Elem>& pair_value) {
        // S(A_target) = h_target^{-1} (S_pair - h_other S(A_other))
        const Field::Elem hinv = field.inv(uplink_gains[std::size_t(target)]);
        const Field::Elem hoth = uplink_gains[std::size_t(other)];
        std::vector<Field::Elem> out(k);
        const auto& known_other = known[std::size_t(other)];
        for (std::size_t j = 0; j < k; ++j) {
            out[j] = field.mul(hinv, field.sub(pair_value[j], field.mul(hoth, known_other[j])));
        }
        known[std::size_t(target)] = std::move(out);
    };

    for (int j = own_index + 1; j < L; ++j) solve(j, j - 1, pair_values[std::size_t(j - 1)]);
    for (int j = own_index - 1; j >= 0; --j) solve(j, j + 1, pair_values[std::size_t(j)]);
    return known;
}

namespace {

struct FdfMessages {
    // [user][segment] -> k_pair symbols
    std::vector<std::vector<std::vector<Field::Elem>>> common;
    // [solo slot][segment] -> k_solo symbols
    std::vector<std::vector<std::vector<Field::Elem>>> excess;
};

struct FdfCodes {
    std::vector<Field::Elem> pair_gen;                 // k_pair x pair_seg_len
    std::vector<std::vector<Field::Elem>> pair_dither;  // per user
    std::vector<std::vector<Field::Elem>> solo_gen;     // per solo slot
    std::vector<std::vector<Field::Elem>> solo_dither;
    std::vector<Field::Elem> down_gen;  // k_tuple x downlink_seg_len
    std::vector<Field::Elem> down_dither;
};

FdfCodes sample_fdf_codes(const MwrcConfig& config, const FdfPlan& plan, Rng& rng) {
    const Field& f = config.field;
    FdfCodes c;
    if (plan.k_pair > 0) {
        c.pair_gen = random_injective_gen(f, plan.k_pair, plan.pair_seg_len, rng);
        for (int i = 0; i < config.users(); ++i) {
            c.pair_dither.push_back(random_entries(f, std::size_t(plan.pair_seg_len), rng));
        }
    }
    for (std::size_t m = 0; m < plan.split_users.size(); ++m) {
        c.solo_gen.push_back(random_injective_gen(f, plan.k_solo[m], plan.solo_seg_len[m], rng));
        c.solo_dither.push_back(random_entries(f, std::size_t(plan.solo_seg_len[m]), rng));
    }
    c.down_gen = random_injective_gen(f, plan.k_tuple, plan.downlink_seg_len, rng);
    c.down_dither = random_entries(f, std::size_t(plan.downlink_seg_len), rng);
    return c;
}

FdfMessages sample_fdf_messages(const MwrcConfig& config, const FdfPlan& plan, Rng& rng) {
    FdfMessages m;
    m.common.resize(std::size_t(config.users()));
    for (int i = 0; i < config.users(); ++i) {
        for (int v = 0; v < plan.segments; ++v) {
            m.common[std::size_t(i)].push_back(random_symbols(config.field, plan.k_pair, rng));
        }
    }
    m.excess.resize(plan.split_users.size());
    for (std::size_t slot = 0; slot < plan.split_users.size(); ++slot) {
        for (int v = 0; v < plan.segments; ++v) {
            m.excess[slot].push_back(random_symbols(config.field, plan.k_solo[slot], rng));
        }
    }
    return m;
}

}  // namespace

TrialReport run_fdf_trial(const MwrcConfig& config, const RateAllocation& rates,
                          const FdfPlan& plan, std::uint64_t master_seed,
                          std::uint64_t trial_index) {
    const Field& f = config.field;
    const int L = config.users();
    const int D = static_cast<int>(plan.split_users.size());

    Rng codes_rng(derive_seed(master_seed, trial_index, stream::kCodes));
    Rng msg_rng(derive_seed(master_seed, trial_index, stream::kMessages));
    Rng relay_noise(derive_seed(master_seed, trial_index, stream::kRelayNoise));
    std::vector<Rng> user_noise;
    for (int i = 0; i < L; ++i) {
        user_noise.emplace_back(derive_seed(master_seed, trial_index, stream::kUserNoiseBase + std::uint64_t(i) + 1));
    }

    const FdfCodes codes = sample_fdf_codes(config, plan, codes_rng);
    const FdfMessages msgs = sample_fdf_messages(config, plan, msg_rng);

    TrialReport report;
    report.users = L;
    report.user_ok.assign(std::size_t(L), 1);
    report.peer_ok.assign(std::size_t(L) * std::size_t(L), 1);

    // ---- uplink: relay decodes one function value per (sub-block, segment)
    // decoded pair values [l][segment], decoded solo values [slot][segment]
    std::vector<std::vector<std::vector<Field::Elem>>> relay_pairs(static_cast<std::size_t>(std::max(L - 1, 0)));
    std::vector<std::vector<std::vector<Field::Elem>>> relay_solos(static_cast<std::size_t>(D));

    std::vector<Field::Elem> channel_in(static_cast<std::size_t>(L));
    int pair_index = 0;
    for (const Subblock& block : plan.schedule.blocks) {
        if (block.kind == Subblock::Kind::Pair) {
            const int l = block.first;
            const Field::Elem hl = config.uplink_gains[std::size_t(l)];
            const Field::Elem hr = config.uplink_gains[std::size_t(l + 1)];
            LinearCode left(f, plan.k_pair, static_cast<int>(plan.pair_seg_len), codes.pair_gen,
                            codes.pair_dither[std::size_t(l)]);
            LinearCode right(f, plan.k_pair, static_cast<int>(plan.pair_seg_len), codes.pair_gen,
                             codes.pair_dither[std::size_t(l + 1)]);
            LinearCode bare(f, plan.k_pair, static_cast<int>(plan.pair_seg_len), codes.pair_gen,
                            std::vector<Field::Elem>(std::size_t(plan.pair_seg_len), 0));
            for (int v = 0; v < plan.segments; ++v) {
                const auto xl = left.encode(msgs.common[std::size_t(l)][std::size_t(v)]);
                const auto xr = right.encode(msgs.common[std::size_t(l + 1)][std::size_t(v)]);
                std::vector<Field::Elem> received(static_cast<std::size_t>(plan.pair_seg_len));
                for (long long t = 0; t < plan.pair_seg_len; ++t) {
                    std::fill(channel_in.begin(), channel_in.end(), f.zero());
                    channel_in[std::size_t(l)] = xl[std::size_t(t)];
                    channel_in[std::size_t(l + 1)] = xr[std::size_t(t)];
                    received[std::size_t(t)] = uplink(config, channel_in, relay_noise);
                }
                // subtract the gain-weighted combined dither, then decode the
                // function message against the bare generator
                for (long long t = 0; t < plan.pair_seg_len; ++t) {
                    const Field::Elem qc =
                        f.add(f.mul(hl, codes.pair_dither[std::size_t(l)][std::size_t(t)]),
                              f.mul(hr, codes.pair_dither[std::size_t(l + 1)][std::size_t(t)]));
                    received[std::size_t(t)] = f.sub(received[std::size_t(t)], qc);
                }
                const std::uint64_t decoded = ml_decode(bare, received, config.noise[0],
                                                        CandidateSet::all(plan.k_pair), plan.budget);
                auto decoded_syms = index_to_symbols(f, decoded, plan.k_pair);

                std::vector<Field::Elem> truth(static_cast<std::size_t>(plan.k_pair));
                const auto& al = msgs.common[std::size_t(l)][std::size_t(v)];
                const auto& ar = msgs.common[std::size_t(l + 1)][std::size_t(v)];
                for (int j = 0; j < plan.k_pair; ++j) {
                    truth[std::size_t(j)] = f.add(f.mul(hl, al[std::size_t(j)]), f.mul(hr, ar[std::size_t(j)]));
                }
                report.relay_ok.push_back(decoded_syms == truth ? 1 : 0);
                relay_pairs[std::size_t(pair_index)].push_back(std::move(decoded_syms));
            }
            ++pair_index;
        } else {
            const int d = block.first;
            const int slot = plan.solo_slot(d);
            const Field::Elem h = config.uplink_gains[std::size_t(d)];
            const Field::Elem hinv = f.inv(h);
            const NoisePmf eff = config.noise[0].scaled(f, hinv);
            LinearCode code(f, plan.k_solo[std::size_t(slot)],
                            static_cast<int>(plan.solo_seg_len[std::size_t(slot)]),
                            codes.solo_gen[std::size_t(slot)], codes.solo_dither[std::size_t(slot)]);
            for (int v = 0; v < plan.segments; ++v) {
                const auto x = code.encode(msgs.excess[std::size_t(slot)][std::size_t(v)]);
                std::vector<Field::Elem> received(static_cast<std::size_t>(block.length / plan.segments));
                for (long long t = 0; t < plan.solo_seg_len[std::size_t(slot)]; ++t) {
                    std::fill(channel_in.begin(), channel_in.end(), f.zero());
                    channel_in[std::size_t(d)] = x[std::size_t(t)];
                    received[std::size_t(t)] = uplink(config, channel_in, relay_noise);
                }
                // scale by the inverse gain, then decode the solo message
                for (auto& y : received) y = f.mul(hinv, y);
                const std::uint64_t decoded =
                    ml_decode(code, received, eff,
                              CandidateSet::all(plan.k_solo[std::size_t(slot)]), plan.budget);
                auto decoded_syms = index_to_symbols(f, decoded, plan.k_solo[std::size_t(slot)]);
                report.relay_ok.push_back(
                    decoded_syms == msgs.excess[std::size_t(slot)][std::size_t(v)] ? 1 : 0);
                relay_solos[std::size_t(slot)].push_back(std::move(decoded_syms));
            }
        }
    }

    // ---- downlink: broadcast the decoded function tuple per segment
    LinearCode down(f, plan.k_tuple, static_cast<int>(plan.downlink_seg_len), codes.down_gen,
                    codes.down_dither);
    const int pair_count = (plan.k_pair > 0) ? L - 1 : 0;

    auto tuple_vector = [&](int v) {
        std::vector<Field::Elem> u;
        u.reserve(std::size_t(plan.k_tuple));
        for (int l = 0; l < pair_count; ++l) {
            const auto& p = relay_pairs[std::size_t(l)][std::size_t(v)];
            u.insert(u.end(), p.begin(), p.end());
        }
        for (int slot = 0; slot < D; ++slot) {
            const auto& b = relay_solos[std::size_t(slot)][std::size_t(v)];
            u.insert(u.end(), b.begin(), b.end());
        }
        return u;
    };

    // decoded tuples per user per segment
    std::vector<std::vector<std::vector<Field::Elem>>> user_tuples(static_cast<std::size_t>(L));

    for (int v = 0; v < plan.segments; ++v) {
        const auto u = tuple_vector(v);
        const std::uint64_t sent_index = symbols_to_index(f, u);
        const auto x0 = down.encode(u);
        for (int i = 0; i < L; ++i) {
            std::vector<Field::Elem> received(static_cast<std::size_t>(plan.downlink_seg_len));
            for (long long t = 0; t < plan.downlink_seg_len; ++t) {
                received[std::size_t(t)] = downlink(config, i, x0[std::size_t(t)], user_noise[std::size_t(i)]);
            }
            const Field::Elem hinv = f.inv(config.downlink_gains[std::size_t(i)]);
            for (auto& y : received) y = f.mul(hinv, y);
            const NoisePmf eff = config.noise[std::size_t(i) + 1].scaled(f, hinv);

            CandidateSet cand;
            const int slot = plan.solo_slot(i);
            if (slot >= 0) {
                // side information: pin the user's own excess block
                int offset = pair_count * plan.k_pair;
                for (int m = 0; m < slot; ++m) offset += plan.k_solo[std::size_t(m)];
                std::vector<Field::Elem> base(std::size_t(plan.k_tuple), 0);
                const auto& own = msgs.excess[std::size_t(slot)][std::size_t(v)];
                for (int j = 0; j < plan.k_solo[std::size_t(slot)]; ++j) {
                    base[std::size_t(offset + j)] = own[std::size_t(j)];
                }
                cand.base = symbols_to_index(f, base);
                for (int pos = 0; pos < plan.k_tuple; ++pos) {
                    if (pos < offset || pos >= offset + plan.k_solo[std::size_t(slot)]) {
                        cand.free_positions.push_back(pos);
                    }
                }
            } else {
                cand = CandidateSet::all(plan.k_tuple);
            }

            const std::uint64_t decoded = ml_decode(down, received, eff, cand, plan.budget);
            if (decoded != sent_index) report.user_ok[std::size_t(i)] = 0;
            user_tuples[std::size_t(i)].push_back(index_to_symbols(f, decoded, plan.k_tuple));
        }
    }

    // ---- recovery: chain-decode the common parts, read off the excess parts
    for (int i = 0; i < L; ++i) {
        for (int v = 0; v < plan.segments; ++v) {
            const auto& tup = user_tuples[std::size_t(i)][std::size_t(v)];
            std::vector<std::vector<Field::Elem>> pair_vals;
            for (int l = 0; l < pair_count; ++l) {
                pair_vals.emplace_back(tup.begin() + std::ptrdiff_t(l) * plan.k_pair,
                                       tup.begin() + std::ptrdiff_t(l + 1) * plan.k_pair);
            }
            std::vector<std::vector<Field::Elem>> commons;
            if (plan.k_pair > 0) {
                commons = chain_decode(f, config.uplink_gains, pair_vals, i,
                                       msgs.common[std::size_t(i)][std::size_t(v)]);
            } else {
                commons.assign(std::size_t(L), {});
            }
            for (int j = 0; j < L; ++j) {
                if (j == i) continue;
                bool ok = commons[std::size_t(j)] == msgs.common[std::size_t(j)][std::size_t(v)];
                const int jslot = plan.solo_slot(j);
                if (ok && jslot >= 0) {
                    int offset = pair_count * plan.k_pair;
                    for (int m = 0; m < jslot; ++m) offset += plan.k_solo[std::size_t(m)];
                    const auto first = tup.begin() + offset;
                    ok = std::equal(first, first + plan.k_solo[std::size_t(jslot)],
                                    msgs.excess[std::size_t(jslot)][std::size_t(v)].begin());
                }
                if (!ok) report.peer_ok[std::size_t(i) * std::size_t(L) + std::size_t(j)] = 0;
            }
        }
    }
    return report;
}

TrialReport run_fdf_trial(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          std::uint64_t seed) {
    const FdfPlan plan = plan_fdf(config, rates, n);
    return run_fdf_trial(config, rates, plan, seed, 0);
}

namespace {

constexpr double kWilsonZ = 1.959963984540054;  // 97.5% normal quantile

double wilson_low(long long errors, long long trials) {
    if (trials == 0 || errors == 0) return 0.0;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return std::max(0.0, center - half);
}

double wilson_high(long long errors, long long trials) {
    if (trials == 0 || errors == trials) return 1.0;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return std::min(1.0, center + half);
}

template <typename TrialFn>
BatchResult run_batch(long long trials, int threads, TrialFn&& trial_fn) {
    BatchResult result;
    result.trials = trials;
    if (trials <= 0) return result;

    const int workers = std::max(1, threads);
    std::vector<BatchResult> partial(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const long long chunk = (trials + workers - 1) / workers;

    auto work = [&](int w) {
        BatchResult& acc = partial[std::size_t(w)];
        const long long begin = w * chunk;
        const long long end = std::min(trials, begin + chunk);
        for (long long t = begin; t < end; ++t) {
            const TrialReport report = trial_fn(static_cast<std::uint64_t>(t));
            if (report.end_to_end_error()) ++acc.e2e_errors;
            if (!report.relay_clean()) {
                ++acc.relay_error_trials;
            } else {
                ++acc.relay_clean_trials;
                if (!report.recovery_clean()) ++acc.user_error_trials;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (const BatchResult& p : partial) {
        result.e2e_errors += p.e2e_errors;
        result.relay_error_trials += p.relay_error_trials;
        result.relay_clean_trials += p.relay_clean_trials;
        result.user_error_trials += p.user_error_trials;
    }
    return result;
}

}  // namespace

double BatchResult::p_e() const {
    return trials > 0 ? static_cast<double>(e2e_errors) / static_cast<double>(trials) : 0.0;
}

double BatchResult::ci_low() const { return wilson_low(e2e_errors, trials); }

double BatchResult::ci_high() const { return wilson_high(e2e_errors, trials); }

double BatchResult::relay_err() const {
    return trials > 0 ? static_cast<double>(relay_error_trials) / static_cast<double>(trials) : 0.0;
}

double BatchResult::user_err() const {
    return relay_clean_trials > 0
               ? static_cast<double>(user_error_trials) / static_cast<double>(relay_clean_trials)
               : 0.0;
}

BatchResult run_fdf_batch(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          int segments, std::uint64_t budget, long long trials,
                          std::uint64_t master_seed, int threads) {
    const FdfPlan plan = plan_fdf(config, rates, n, segments, budget);
    return run_batch(trials, threads, [&](std::uint64_t t) {
        return run_fdf_trial(config, rates, plan, master_seed, t);
    });
}

CdfPlan plan_cdf(const MwrcConfig& config, const RateAllocation& rates, long long n,
                 int segments, std::uint64_t budget) {
    config.validate();
    rates.validate();
    if (config.users() != 2 || rates.users() != 2) {
        throw ConfigError("the joint-decoding baseline covers exactly two users");
    }
    if (rates.sum() == Rational(0)) throw ConfigError("all rates are zero");
    if (n < 1) throw ConfigError("blocklength must be positive");

    const Field& f = config.field;
    CdfPlan plan;
    plan.budget = budget;

    auto attempt = [&](int ns, std::string* why) -> bool {
        if (n % ns != 0) {
            if (why) *why = "segment count does not divide the blocklength";
            return false;
        }
        const int k1 = rates.rates[0] > Rational(0) ? symbols_for(f, Rational(n) * rates.rates[0], ns) : 0;
        const int k2 = rates.rates[1] > Rational(0) ? symbols_for(f, Rational(n) * rates.rates[1], ns) : 0;
        if (!space_fits(f, k1 + k2, budget)) {
            if (why) {
                *why = "joint message space |F|^" + std::to_string(k1 + k2) +
                       " exceeds the enumeration budget " + std::to_string(budget);
            }
            return false;
        }
        const long long seg = n / ns;
        if (k1 + k2 > seg) {
            throw ConfigError("sum rate too high: needs " + std::to_string(k1 + k2) +
                              " symbols in segments of " + std::to_string(seg));
        }
        plan.segments = ns;
        plan.seg_len = seg;
        plan.k_user1 = k1;
        plan.k_user2 = k2;
        return true;
    };

    if (segments > 0) {
        std::string why;
        if (!attempt(segments, &why)) {
            if (why.find("budget") != std::string::npos) throw BudgetExceededError(why);
            throw ConfigError("segment count " + std::to_string(segments) + " rejected: " + why);
        }
        return plan;
    }
    std::string last_why;
    for (long long ns = 1; ns <= n; ++ns) {
        if (attempt(static_cast<int>(ns), &last_why)) return plan;
    }
    throw BudgetExceededError("no admissible segment count for n=" + std::to_string(n) + ": " +
                              last_why);
}

TrialReport run_cdf_trial(const MwrcConfig& config, const RateAllocation& rates,
                          const CdfPlan& plan, std::uint64_t master_seed,
                          std::uint64_t trial_index) {
    const Field& f = config.field;
    const int seg = static_cast<int>(plan.seg_len);
    const int k1 = plan.k_user1;
    const int k2 = plan.k_user2;
    const int kj = k1 + k2;

    Rng codes_rng(derive_seed(master_seed, trial_index, stream::kCodes));
    Rng msg_rng(derive_seed(master_seed, trial_index, stream::kMessages));
    Rng relay_noise(derive_seed(master_seed, trial_index, stream::kRelayNoise));
    Rng noise1(derive_seed(master_seed, trial_index, stream::kUserNoiseBase + 1));
    Rng noise2(derive_seed(master_seed, trial_index, stream::kUserNoiseBase + 2));

    const auto gen1 = random_entries(f, std::size_t(k1) * seg, codes_rng);
    const auto q1 = random_entries(f, std::size_t(seg), codes_rng);
    const auto gen2 = random_entries(f, std::size_t(k2) * seg, codes_rng);
    const auto q2 = random_entries(f, std::size_t(seg), codes_rng);
    const auto dgen = random_entries(f, std::size_t(kj) * seg, codes_rng);
    const auto dq = random_entries(f, std::size_t(seg), codes_rng);

    LinearCode code1(f, k1, seg, gen1, q1);
    LinearCode code2(f, k2, seg, gen2, q2);
    LinearCode down(f, kj, seg, dgen, dq);

    // The relay sees s1 (h1 G1) + s2 (h2 G2) + combined dither + noise, i.e. a
    // single linear code over the concatenated message (s1 | s2).
    const Field::Elem h1 = config.uplink_gains[0];
    const Field::Elem h2 = config.uplink_gains[1];
    std::vector<Field::Elem> joint_gen;
    joint_gen.reserve(std::size_t(kj) * seg);
    for (int i = 0; i < k1; ++i) {
        for (int t = 0; t < seg; ++t) joint_gen.push_back(f.mul(h1, gen1[std::size_t(i) * seg + std::size_t(t)]));
    }
    for (int i = 0; i < k2; ++i) {
        for (int t = 0; t < seg; ++t) joint_gen.push_back(f.mul(h2, gen2[std::size_t(i) * seg + std::size_t(t)]));
    }
    std::vector<Field::Elem> joint_dither(static_cast<std::size_t>(seg));
    for (int t = 0; t < seg; ++t) {
        joint_dither[std::size_t(t)] = f.add(f.mul(h1, q1[std::size_t(t)]), f.mul(h2, q2[std::size_t(t)]));
    }
    LinearCode joint(f, kj, seg, joint_gen, joint_dither);

    TrialReport report;
    report.users = 2;
    report.user_ok.assign(2, 1);
    report.peer_ok.assign(4, 1);

    std::vector<Field::Elem> channel_in(2);
    for (int v = 0; v < plan.segments; ++v) {
        const auto w1 = random_symbols(f, k1, msg_rng);
        const auto w2 = random_symbols(f, k2, msg_rng);
        const auto x1 = code1.encode(w1);
        const auto x2 = code2.encode(w2);

        std::vector<Field::Elem> received(static_cast<std::size_t>(seg));
        for (int t = 0; t < seg; ++t) {
            channel_in[0] = x1[std::size_t(t)];
            channel_in[1] = x2[std::size_t(t)];
            received[std::size_t(t)] = uplink(config, channel_in, relay_noise);
        }
        const std::uint64_t joint_decoded =
            ml_decode(joint, received, config.noise[0], CandidateSet::all(kj), plan.budget);
        const auto joint_syms = index_to_symbols(f, joint_decoded, kj);
        const bool relay_right =
            std::equal(joint_syms.begin(), joint_syms.begin() + k1, w1.begin()) &&
            std::equal(joint_syms.begin() + k1, joint_syms.end(), w2.begin());
        report.relay_ok.push_back(relay_right ? 1 : 0);

        // broadcast the decoded pair; each user pins its own block
        const auto x0 = down.encode(joint_syms);
        const std::uint64_t sent_index = joint_decoded;
        const std::vector<Field::Elem>* own[2] = {&w1, &w2};
        Rng* noises[2] = {&noise1, &noise2};
        for (int i = 0; i < 2; ++i) {
            std::vector<Field::Elem> y(static_cast<std::size_t>(seg));
            for (int t = 0; t < seg; ++t) {
                y[std::size_t(t)] = downlink(config, i, x0[std::size_t(t)], *noises[i]);
            }
            const Field::Elem hinv = f.inv(config.downlink_gains[std::size_t(i)]);
            for (auto& e : y) e = f.mul(hinv, e);
            const NoisePmf eff = config.noise[std::size_t(i) + 1].scaled(f, hinv);

            CandidateSet cand;
            std::vector<Field::Elem> base(std::size_t(kj), 0);
            const int offset = (i == 0) ? 0 : k1;
            const int own_k = (i == 0) ? k1 : k2;
            for (int j = 0; j < own_k; ++j) base[std::size_t(offset + j)] = (*own[i])[std::size_t(j)];
            cand.base = symbols_to_index(f, base);
            for (int pos = 0; pos < kj; ++pos) {
                if (pos < offset || pos >= offset + own_k) cand.free_positions.push_back(pos);
            }

            const std::uint64_t decoded = ml_decode(down, y, eff, cand, plan.budget);
            if (decoded != sent_index) report.user_ok[std::size_t(i)] = 0;

            const auto tup = index_to_symbols(f, decoded, kj);
            const int peer = 1 - i;
            const int poff = (peer == 0) ? 0 : k1;
            const int pk = (peer == 0) ? k1 : k2;
            const bool peer_right =
                std::equal(tup.begin() + poff, tup.begin() + poff + pk, own[peer]->begin());
            if (!peer_right) report.peer_ok[std::size_t(i) * 2 + std::size_t(peer)] = 0;
        }
    }
    return report;
}

TrialReport run_cdf_trial(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          std::uint64_t seed) {
    const CdfPlan plan = plan_cdf(config, rates, n);
    return run_cdf_trial(config, rates, plan, seed, 0);
}

BatchResult run_cdf_batch(const MwrcConfig& config, const RateAllocation& rates, long long n,
                          int segments, std::uint64_t budget, long long trials,
                          std::uint64_t master_seed, int threads) {
    const CdfPlan plan = plan_cdf(config, rates, n, segments, budget);
    return run_batch(trials, threads, [&](std::uint64_t t) {
        return run_cdf_trial(config, rates, plan, master_seed, t);
    });
}

}  // namespace mwrc

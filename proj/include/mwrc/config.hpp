#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwrc/rational.hpp"
#include "mwrc/sim.hpp"

namespace mwrc {

/// Field description as it appears in a config file:
///   field = { char = 2, deg = 2, modulus = [1, 1, 1] }
/// modulus coefficients run from degree 0 upward and may be omitted.
struct FieldSpecText {
    std::uint32_t characteristic = 2;
    std::uint32_t degree = 1;
    std::optional<std::vector<std::uint32_t>> modulus;

    bool operator==(const FieldSpecText&) const = default;
};

/// Per-node noise: either a binary crossover (kept as the literal text so
/// equal inputs compare exactly) or an explicit pmf over the field.
struct NoiseSpec {
    std::optional<std::string> rho;
    std::optional<std::vector<double>> pmf;

    bool operator==(const NoiseSpec&) const = default;
};

struct ChannelSpec {
    int users = 0;
    FieldSpecText field;
    std::vector<std::uint32_t> uplink_gains;
    std::vector<std::uint32_t> downlink_gains;
    std::vector<NoiseSpec> noise;  // node 0 .. L

    bool operator==(const ChannelSpec&) const = default;
};

struct ExperimentConfig {
    ChannelSpec channel;
    std::string scheme;                      // "fdf" | "cdf"
    std::vector<std::string> rate_literals;  // exact decimal strings
    std::vector<long long> n_list;
    long long trials = 0;
    std::uint64_t seed = 0;
    std::string output;
    int segments = 0;  // 0 = choose automatically
    std::uint64_t budget = kDefaultDecodeBudget;
    int threads = 1;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the key-value config dialect. Unknown keys are rejected.
ExperimentConfig parse_experiment(const std::string& text);

/// Channel-only files (the keys L, field, uplink_gains, downlink_gains, noise).
ChannelSpec parse_channel(const std::string& text);

/// Canonical text form; parse(serialize(parse(text))) == parse(text).
std::string serialize(const ExperimentConfig& config);

/// Instantiates the channel (builds the field and validates everything).
MwrcConfig build_channel(const ChannelSpec& spec);

RateAllocation build_rates(const std::vector<std::string>& literals);

}  // namespace mwrc

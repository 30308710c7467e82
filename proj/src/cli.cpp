#include "mwrc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mwrc/code.hpp"
#include "mwrc/config.hpp"
#include "mwrc/csv.hpp"
#include "mwrc/regions.hpp"
#include "mwrc/sim.hpp"

namespace mwrc::cli {

namespace {

double parse_rho(const std::string& text, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == nullptr || *end != '\0' || !(v >= 0.0) || v > 0.5) {
        throw ConfigError(std::string(what) + " must be a number in [0, 0.5], got '" + text + "'");
    }
    return v;
}

void write_frontier(const std::string& path, const std::string& name,
                    const std::vector<std::array<double, 2>>& frontier) {
    CsvWriter csv(path);
    csv.header({"region_name", "param_or_vertex_index", "R1", "R2"});
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        csv.row({name, std::to_string(i), csv_num(frontier[i][0]), csv_num(frontier[i][1])});
    }
    csv.close();
}

std::string field_label(const MwrcConfig& config) {
    return "GF(" + std::to_string(config.field.order()) + ")";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int cmd_region(const RegionOptions& opt, std::ostream& out, std::ostream& err) {
    const double rho0 = parse_rho(opt.rho0, "rho0");
    const double rho1 = parse_rho(opt.rho1, "rho1");
    const double rho2 = parse_rho(opt.rho2, "rho2");
    if (opt.beta_steps < 2) throw ConfigError("beta-steps must be at least 2");

    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);

    const RateRegion capacity = binary_capacity_region(rho0, rho1, rho2);
    const RateRegion cdf = cdf_region(rho0, rho1, rho2);
    const FdfSeparateRegion fdf_sep(rho0, rho1, rho2, opt.beta_steps);
    if (fdf_sep.grid_warning()) {
        err << "warning: sweep grid too coarse, frontier moved > 1e-4 when doubled;"
            << " rerun with more --beta-steps\n";
    }

    write_frontier((fs::path(opt.out_dir) / "capacity.csv").string(), "capacity",
                   region_frontier_2d(capacity));
    write_frontier((fs::path(opt.out_dir) / "fdf_separate.csv").string(), "fdf_separate",
                   fdf_sep.frontier());
    write_frontier((fs::path(opt.out_dir) / "cdf.csv").string(), "cdf",
                   region_frontier_2d(cdf));
    out << "wrote capacity.csv, fdf_separate.csv, cdf.csv under " << opt.out_dir << "\n";
    return kOk;
}

int cmd_phase(const PhaseOptions& opt, std::ostream& out, std::ostream&) {
    const double rho0 = parse_rho(opt.rho0, "rho0");
    if (opt.grid < 2) throw ConfigError("grid must be at least 2");

    const auto cells = phase_diagram(rho0, opt.grid);
    CsvWriter csv(opt.out_path);
    csv.header({"rho1", "rho2", "fdf_sep_opt", "cdf_opt"});
    for (const PhaseCell& c : cells) {
        csv.row({csv_num(c.rho1), csv_num(c.rho2), c.fdf_separate_optimal ? "1" : "0",
                 c.cdf_optimal ? "1" : "0"});
    }
    csv.close();
    out << "wrote " << opt.out_path << " (" << cells.size() << " cells)\n";
    return kOk;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream&) {
    ExperimentConfig exp = parse_experiment(read_file(opt.config_path));
    if (opt.out_override) exp.output = *opt.out_override;
    if (opt.seed_override) exp.seed = *opt.seed_override;
    if (opt.threads_override) exp.threads = *opt.threads_override;
    if (exp.output.empty()) throw ConfigError("no output path: set 'output' or pass --out");
    if (exp.trials < 1) throw ConfigError("trials must be positive");
    if (exp.threads < 1) throw ConfigError("threads must be positive");

    const MwrcConfig channel = build_channel(exp.channel);
    const RateAllocation rates = build_rates(exp.rate_literals);
    if (rates.users() != channel.users()) {
        throw ConfigError("rates count does not match L");
    }

    std::string rate_tuple;
    for (std::size_t i = 0; i < exp.rate_literals.size(); ++i) {
        if (i) rate_tuple += ':';
        rate_tuple += exp.rate_literals[i];
    }

    CsvWriter csv(exp.output);
    csv.header({"scheme", "L", "field", "n", "trials", "rate_tuple", "p_e", "ci_low", "ci_high",
                "relay_err", "user_err", "seed"});
    for (long long n : exp.n_list) {
        const BatchResult batch =
            exp.scheme == "fdf"
                ? run_fdf_batch(channel, rates, n, exp.segments, exp.budget, exp.trials, exp.seed,
                                exp.threads)
                : run_cdf_batch(channel, rates, n, exp.segments, exp.budget, exp.trials, exp.seed,
                                exp.threads);
        csv.row({exp.scheme, std::to_string(channel.users()), field_label(channel),
                 std::to_string(n), std::to_string(exp.trials), rate_tuple, csv_num(batch.p_e()),
                 csv_num(batch.ci_low()), csv_num(batch.ci_high()), csv_num(batch.relay_err()),
                 csv_num(batch.user_err()), std::to_string(exp.seed)});
        out << exp.scheme << " n=" << n << " p_e=" << csv_num(batch.p_e()) << "\n";
    }
    csv.close();
    return kOk;
}

int cmd_common_rate(const CommonRateOptions& opt, std::ostream& out, std::ostream&) {
    double capacity = 0.0;
    int users = 2;
    std::string label;
    if (opt.config_path) {
        const MwrcConfig channel = build_channel(parse_channel(read_file(*opt.config_path)));
        capacity = common_rate_capacity(channel);
        users = channel.users();
        label = field_label(channel);
    } else if (opt.rho0 && opt.rho1 && opt.rho2) {
        const double rho0 = parse_rho(*opt.rho0, "rho0");
        const double rho1 = parse_rho(*opt.rho1, "rho1");
        const double rho2 = parse_rho(*opt.rho2, "rho2");
        const double h[] = {binary_entropy(rho0), binary_entropy(rho1), binary_entropy(rho2)};
        capacity = common_rate_capacity(2, 1.0, h);
        label = "GF(2)";
    } else {
        throw ConfigError("common-rate needs --config or all of --rho0/--rho1/--rho2");
    }

    out << "common-rate capacity: " << csv_num(capacity) << " bits/channel use\n";
    if (opt.out_path) {
        CsvWriter csv(*opt.out_path);
        csv.header({"L", "field", "common_rate_capacity"});
        csv.row({std::to_string(users), label, csv_num(capacity)});
        csv.close();
    }
    return kOk;
}

namespace {

// Field axioms on every pair/triple for small orders, randomized triples
// beyond that.
long long check_axioms(const Field& f, std::ostream& err, bool* failed) {
    long long checks = 0;
    auto fail = [&](const std::string& msg) {
        err << "[FAIL] GF(" << f.order() << ") axioms: " << msg << "\n";
        *failed = true;
    };
    auto verify_triple = [&](Field::Elem a, Field::Elem b, Field::Elem c) {
        ++checks;
        if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) {
            return fail("addition not associative at (" + f.elem_str(a) + ", " + f.elem_str(b) +
                        ", " + f.elem_str(c) + ")");
        }
        if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) {
            return fail("multiplication not associative");
        }
        if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) {
            return fail("distributivity fails at (" + f.elem_str(a) + ", " + f.elem_str(b) + ", " +
                        f.elem_str(c) + ")");
        }
    };
    auto verify_pair = [&](Field::Elem a, Field::Elem b) {
        ++checks;
        if (f.add(a, b) != f.add(b, a)) return fail("addition not commutative");
        if (f.mul(a, b) != f.mul(b, a)) return fail("multiplication not commutative");
    };

    const auto order = static_cast<Field::Elem>(f.order());
    for (Field::Elem a = 0; a < order; ++a) {
        if (f.add(a, f.zero()) != a) fail("0 is not the additive identity");
        if (f.mul(a, f.one()) != a) fail("1 is not the multiplicative identity");
        if (f.add(a, f.neg(a)) != f.zero()) fail("negation is not an additive inverse");
        if (a != 0 && f.mul(a, f.inv(a)) != f.one()) fail("inv is not a multiplicative inverse");
        checks += 4;
    }
    if (f.order() <= 16) {
        for (Field::Elem a = 0; a < order; ++a) {
            for (Field::Elem b = 0; b < order; ++b) {
                verify_pair(a, b);
                for (Field::Elem c = 0; c < order; ++c) verify_triple(a, b, c);
            }
        }
    } else {
        Rng rng(derive_seed(0xA51057, f.order()));
        for (int i = 0; i < 3000; ++i) {
            const auto a = static_cast<Field::Elem>(rng.below(f.order()));
            const auto b = static_cast<Field::Elem>(rng.below(f.order()));
            const auto c = static_cast<Field::Elem>(rng.below(f.order()));
            verify_pair(a, b);
            verify_triple(a, b, c);
        }
    }
    return checks;
}

// Unique solvability of a + x = b and c y = d, plus the translate/scale
// surjectivity facts.
long long check_solvability(const Field& f, std::ostream& err, bool* failed) {
    long long checks = 0;
    auto fail = [&](const std::string& msg) {
        err << "[FAIL] GF(" << f.order() << ") solvability: " << msg << "\n";
        *failed = true;
    };
    const auto order = static_cast<Field::Elem>(f.order());
    std::vector<bool> seen(f.order());
    for (Field::Elem a = 0; a < order; ++a) {
        std::fill(seen.begin(), seen.end(), false);
        for (Field::Elem x = 0; x < order; ++x) seen[f.add(a, x)] = true;
        ++checks;
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            fail("the translates of " + f.elem_str(a) + " do not cover the field");
        }
        for (Field::Elem b = 0; b < order; ++b) {
            int solutions = 0;
            for (Field::Elem x = 0; x < order; ++x) {
                if (f.add(a, x) == b) ++solutions;
            }
            ++checks;
            if (solutions != 1) {
                fail("a + x = b has " + std::to_string(solutions) + " solutions at a=" +
                     f.elem_str(a) + " b=" + f.elem_str(b));
            }
        }
    }
    for (Field::Elem c = 1; c < order; ++c) {
        std::fill(seen.begin(), seen.end(), false);
        for (Field::Elem y = 0; y < order; ++y) seen[f.mul(c, y)] = true;
        ++checks;
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            fail("the multiples of " + f.elem_str(c) + " do not cover the field");
        }
        for (Field::Elem d = 0; d < order; ++d) {
            int solutions = 0;
            for (Field::Elem y = 0; y < order; ++y) {
                if (f.mul(c, y) == d) ++solutions;
            }
            ++checks;
            if (solutions != 1) {
                fail("c y = d has " + std::to_string(solutions) + " solutions at c=" +
                     f.elem_str(c) + " d=" + f.elem_str(d));
            }
        }
    }
    return checks;
}

// Exact codeword-ensemble counts at k=1, n=2: every message/codeword pair is
// hit by |F|^{nk} assignments and every pair of distinct messages factorizes.
long long check_ensemble(const Field& f, std::ostream& err, bool* failed) {
    long long checks = 0;
    if (f.order() > 8) return 0;  // enumeration grows as |F|^7, keep it small
    const int k = 1, n = 2;
    auto fail = [&](const std::string& msg) {
        err << "[FAIL] GF(" << f.order() << ") ensemble: " << msg << "\n";
        *failed = true;
    };
    const std::uint64_t single_expect = message_space(f, n * k);
    const std::uint64_t pair_expect = message_space(f, n * (k - 1));
    for (std::uint64_t s = 0; s < f.order(); ++s) {
        const auto s1 = index_to_symbols(f, s, k);
        for (std::uint64_t x = 0; x < message_space(f, n); ++x) {
            const auto x1 = index_to_symbols(f, x, n);
            ++checks;
            if (ensemble_count_single(f, k, n, s1, x1) != single_expect) {
                fail("assignment count off at s1=" + std::to_string(s) +
                     " x1=" + std::to_string(x));
                return checks;
            }
        }
    }
    // one representative distinct-message pair, all codeword pairs
    const auto s1 = index_to_symbols(f, 0, k);
    const auto s2 = index_to_symbols(f, 1, k);
    for (std::uint64_t xa = 0; xa < message_space(f, n); ++xa) {
        for (std::uint64_t xb = 0; xb < message_space(f, n); ++xb) {
            const auto x1 = index_to_symbols(f, xa, n);
            const auto x2 = index_to_symbols(f, xb, n);
            ++checks;
            if (ensemble_count_pair(f, k, n, s1, x1, s2, x2) != pair_expect) {
                fail("joint count off at x1=" + std::to_string(xa) + " x2=" + std::to_string(xb));
                return checks;
            }
        }
    }
    return checks;
}

std::pair<std::uint32_t, std::uint32_t> order_to_field(int order) {
    if (order < 2) throw ConfigError("field order must be at least 2");
    for (std::uint32_t p = 2; p <= std::uint32_t(order); ++p) {
        if (!is_prime_u32(p) || order % int(p) != 0) continue;
        std::uint32_t deg = 0;
        int rest = order;
        while (rest % int(p) == 0) {
            rest /= int(p);
            ++deg;
        }
        if (rest != 1) throw ConfigError(std::to_string(order) + " is not a prime power");
        return {p, deg};
    }
    throw ConfigError(std::to_string(order) + " is not a prime power");
}

}  // namespace

int cmd_selfcheck(const SelfcheckOptions& opt, std::ostream& out, std::ostream& err) {
    struct Target {
        std::string label;
        std::uint32_t characteristic;
        std::uint32_t degree;
        std::optional<std::vector<std::uint32_t>> modulus;
    };
    std::vector<Target> targets;
    for (int order : opt.field_orders) {
        const auto [p, deg] = order_to_field(order);
        targets.push_back({"GF(" + std::to_string(order) + ")", p, deg, std::nullopt});
    }
    for (const std::string& spec : opt.extra_fields) {
        std::vector<std::uint32_t> parts;
        std::string token;
        std::istringstream ss(spec);
        while (std::getline(ss, token, ',')) {
            parts.push_back(static_cast<std::uint32_t>(std::strtoul(token.c_str(), nullptr, 10)));
        }
        if (parts.size() < 2) {
            throw ConfigError("extra field needs at least 'char,deg', got '" + spec + "'");
        }
        Target t{"extra(" + spec + ")", parts[0], parts[1], std::nullopt};
        if (parts.size() > 2) {
            t.modulus = std::vector<std::uint32_t>(parts.begin() + 2, parts.end());
        }
        targets.push_back(std::move(t));
    }

    if (targets.empty()) {
        err << "warning: empty field list, nothing to check\n";
        out << "0 suites run\n";
        return kOk;
    }

    bool failed = false;
    for (const Target& t : targets) {
        try {
            const Field f = Field::make(t.characteristic, t.degree, t.modulus);
            bool field_failed = false;
            const long long ax = check_axioms(f, err, &field_failed);
            const long long solv = check_solvability(f, err, &field_failed);
            const long long ens = check_ensemble(f, err, &field_failed);
            out << t.label << ": axioms " << ax << " ok, solvability " << solv
                << " ok, ensemble " << ens << " ok\n";
            failed = failed || field_failed;
        } catch (const Error& e) {
            err << "[FAIL] " << t.label << ": " << e.what() << "\n";
            failed = true;
        }
    }
    return failed ? kSelfcheckFailed : kOk;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const BudgetExceededError& e) {
        err << "error: " << e.what() << "\n";
        return kBudgetError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kArgumentError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kArgumentError;
    }
}

}  // namespace mwrc::cli

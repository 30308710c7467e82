#include <iostream>

#include <CLI11.hpp>

#include "mwrc/cli.hpp"

int main(int argc, char** argv) {
    using namespace mwrc::cli;

    CLI::App app{"multi-way relay channel toolkit: rate regions, optimality maps,"
                 " and Monte-Carlo simulation of relay coding schemes over finite fields"};
    app.require_subcommand(1);

    RegionOptions region_opt;
    auto* region = app.add_subcommand("region",
                                      "export capacity, separate-decoding, and joint-decoding"
                                      " rate-region boundaries as CSV");
    region->add_option("--rho0", region_opt.rho0, "relay crossover probability")
        ->capture_default_str();
    region->add_option("--rho1", region_opt.rho1, "user 1 crossover probability")
        ->capture_default_str();
    region->add_option("--rho2", region_opt.rho2, "user 2 crossover probability")
        ->capture_default_str();
    region->add_option("--beta-steps", region_opt.beta_steps, "sweep resolution")
        ->capture_default_str();
    region->add_option("--out", region_opt.out_dir, "output directory")->capture_default_str();

    PhaseOptions phase_opt;
    auto* phase = app.add_subcommand("phase",
                                     "export the optimality map over (rho1, rho2) as CSV");
    phase->add_option("--rho0", phase_opt.rho0, "relay crossover probability")
        ->capture_default_str();
    phase->add_option("--grid", phase_opt.grid, "grid points per axis")->capture_default_str();
    phase->add_option("--out", phase_opt.out_path, "output CSV path")->capture_default_str();

    SimulateOptions sim_opt;
    std::string sim_out;
    std::uint64_t sim_seed = 0;
    int sim_threads = 0;
    auto* simulate = app.add_subcommand("simulate",
                                        "run Monte-Carlo trials from a config file and write"
                                        " error-rate CSV rows");
    simulate->add_option("--config", sim_opt.config_path, "experiment config file")->required();
    auto* sim_out_opt = simulate->add_option("--out", sim_out, "override the output path");
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "override the master seed");
    auto* sim_threads_opt = simulate->add_option("--threads", sim_threads, "override the worker count");

    CommonRateOptions cr_opt;
    std::string cr_config, cr_rho0, cr_rho1, cr_rho2, cr_out;
    auto* common_rate = app.add_subcommand("common-rate",
                                           "print the common-rate capacity of a channel");
    auto* cr_config_opt = common_rate->add_option("--config", cr_config, "channel config file");
    auto* cr_r0 = common_rate->add_option("--rho0", cr_rho0, "relay crossover (binary shortcut)");
    auto* cr_r1 = common_rate->add_option("--rho1", cr_rho1, "user 1 crossover");
    auto* cr_r2 = common_rate->add_option("--rho2", cr_rho2, "user 2 crossover");
    auto* cr_out_opt = common_rate->add_option("--out", cr_out, "also write a CSV row here");

    SelfcheckOptions check_opt;
    auto* selfcheck = app.add_subcommand("selfcheck",
                                         "exhaustive field-axiom, solvability, and code-ensemble"
                                         " verification");
    selfcheck->add_option("--fields", check_opt.field_orders,
                          "field orders to check (default 2 3 4 5 8)");
    selfcheck->add_option("--extra-field", check_opt.extra_fields,
                          "additional field as 'char,deg[,c0,...,cz]'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kArgumentError;
    }

    return run_guarded(
        [&]() -> int {
            if (*region) return cmd_region(region_opt, std::cout, std::cerr);
            if (*phase) return cmd_phase(phase_opt, std::cout, std::cerr);
            if (*simulate) {
                if (*sim_out_opt) sim_opt.out_override = sim_out;
                if (*sim_seed_opt) sim_opt.seed_override = sim_seed;
                if (*sim_threads_opt) sim_opt.threads_override = sim_threads;
                return cmd_simulate(sim_opt, std::cout, std::cerr);
            }
            if (*common_rate) {
                if (*cr_config_opt) cr_opt.config_path = cr_config;
                if (*cr_r0) cr_opt.rho0 = cr_rho0;
                if (*cr_r1) cr_opt.rho1 = cr_rho1;
                if (*cr_r2) cr_opt.rho2 = cr_rho2;
                if (*cr_out_opt) cr_opt.out_path = cr_out;
                return cmd_common_rate(cr_opt, std::cout, std::cerr);
            }
            if (*selfcheck) return cmd_selfcheck(check_opt, std::cout, std::cerr);
            return kArgumentError;
        },
        std::cerr);
}

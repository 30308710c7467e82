#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mwrc::cli {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kSelfcheckFailed = 1;
constexpr int kArgumentError = 2;
constexpr int kBudgetError = 3;

struct RegionOptions {
    std::string rho0 = "0.1";
    std::string rho1 = "0.05";
    std::string rho2 = "0.2";
    int beta_steps = 2049;
    std::string out_dir = ".";
};

struct PhaseOptions {
    std::string rho0 = "0.25";
    int grid = 256;
    std::string out_path = "phase.csv";
};

struct SimulateOptions {
    std::string config_path;
    std::optional<std::string> out_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
};

struct CommonRateOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> rho0;
    std::optional<std::string> rho1;
    std::optional<std::string> rho2;
    std::optional<std::string> out_path;
};

struct SelfcheckOptions {
    std::vector<int> field_orders = {2, 3, 4, 5, 8};
    // extra fields as "char,deg[,c0,...,cz]" literals
    std::vector<std::string> extra_fields;
};

int cmd_region(const RegionOptions& opt, std::ostream& out, std::ostream& err);
int cmd_phase(const PhaseOptions& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_common_rate(const CommonRateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_selfcheck(const SelfcheckOptions& opt, std::ostream& out, std::ostream& err);

/// Maps a thrown error to the exit-code contract (budget breaches to 3,
/// everything else to 2) and prints it.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace mwrc::cli

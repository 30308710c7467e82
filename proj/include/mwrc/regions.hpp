#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mwrc/prob.hpp"
#include "mwrc/rng.hpp"
#include "mwrc/sim.hpp"

namespace mwrc {

/// coeff . R <= bound
struct HalfSpace {
    std::vector<double> coeff;
    double bound = 0.0;
};

/// Intersection of half-spaces over non-negative rate tuples. Constraint
/// slack of 1e-9 treats the strict inequalities of achievability statements
/// as closed on the closure.
struct RateRegion {
    static constexpr double kSlack = 1e-9;

    std::vector<HalfSpace> constraints;
    std::string source;
    int dims = 0;

    bool contains(std::span<const double> rates) const;
};

/// Cut-set outer bound: every leave-one-out rate sum is limited by the relay's
/// uplink and by that user's downlink.
RateRegion cut_set_bound(const MwrcConfig& config);
RateRegion cut_set_bound(int users, double log2_field, std::span<const double> noise_entropy);

/// The capacity region; coincides with the cut-set bound as a set.
RateRegion capacity_region(const MwrcConfig& config);
RateRegion capacity_region(int users, double log2_field, std::span<const double> noise_entropy);

double common_rate_capacity(const MwrcConfig& config);
double common_rate_capacity(int users, double log2_field, std::span<const double> noise_entropy);

/// Two-user binary specializations parameterized by crossover probabilities.
RateRegion binary_capacity_region(double rho0, double rho1, double rho2);
RateRegion cdf_region(double rho0, double rho1, double rho2);

constexpr int kDefaultBetaSteps = 2049;

/// Achievable region of rate splitting with separate downlink decoding for
/// the two-user binary channel. The region is a union over a time-sharing
/// parameter swept on a uniform grid; membership takes the supremum over the
/// grid, and the exported boundary is the convex hull of the swept corners.
class FdfSeparateRegion {
public:
    FdfSeparateRegion(double rho0, double rho1, double rho2, int beta_steps = kDefaultBetaSteps);

    bool contains(double r1, double r2) const;
    const std::vector<std::array<double, 2>>& frontier() const { return frontier_; }

    /// Set when doubling the grid moved the frontier by more than 1e-4.
    bool grid_warning() const { return grid_warning_; }
    int beta_steps() const { return steps_; }

    struct Corner {
        double r1, r2;
    };

private:
    static std::vector<Corner> sweep(double rho0, double rho1, double rho2, int steps);

    std::vector<Corner> corners_;
    std::vector<std::array<double, 2>> frontier_;
    int steps_;
    bool grid_warning_ = false;
};

/// Exact optimality predicates for the two-user binary channel.
bool lemma_fdf_separate_optimal(double rho0, double rho1, double rho2);
bool lemma_cdf_optimal(double rho0, double rho1, double rho2);

struct PhaseCell {
    double rho1 = 0.0;
    double rho2 = 0.0;
    bool fdf_separate_optimal = false;
    bool cdf_optimal = false;
};

/// Evaluates both predicates on a uniform grid over [0, 1/2]^2 including the
/// endpoints (grid >= 2 points per axis).
std::vector<PhaseCell> phase_diagram(double rho0, int grid);

/// Samples random member pairs and random convex combinations; returns false
/// (and the witness combination, if requested) on the first failure.
bool region_convexity_check(const std::function<bool(std::span<const double>)>& member, int dims,
                            std::span<const double> box_high, int samples, Rng& rng,
                            std::vector<double>* witness = nullptr);

bool region_convexity_check(const RateRegion& region, int samples, Rng& rng,
                            std::vector<double>* witness = nullptr);

/// Upper-right frontier polyline of a two-dimensional polyhedral region,
/// ordered by increasing first coordinate.
std::vector<std::array<double, 2>> region_frontier_2d(const RateRegion& region);

}  // namespace mwrc

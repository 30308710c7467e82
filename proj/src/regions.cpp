#include "mwrc/regions.hpp"

#include <algorithm>
#include <cmath>

namespace mwrc {

bool RateRegion::contains(std::span<const double> rates) const {
    if (static_cast<int>(rates.size()) != dims) return false;
    for (double r : rates) {
        if (!(r >= -kSlack)) return false;
    }
    for (const HalfSpace& h : constraints) {
        double dot = 0.0;
        for (int i = 0; i < dims; ++i) dot += h.coeff[std::size_t(i)] * rates[std::size_t(i)];
        if (dot > h.bound + kSlack) return false;
    }
    return true;
}

namespace {

std::vector<double> entropies_of(const MwrcConfig& config) {
    std::vector<double> h;
    h.reserve(config.noise.size());
    for (const NoisePmf& pmf : config.noise) h.push_back(entropy_bits(pmf));
    return h;
}

// A leave-one-out sum constraint: all coefficients 1 except user `skip`.
HalfSpace complement_constraint(int users, int skip, double bound) {
    HalfSpace h;
    h.coeff.assign(std::size_t(users), 1.0);
    h.coeff[std::size_t(skip)] = 0.0;
    h.bound = bound;
    return h;
}

}  // namespace

RateRegion cut_set_bound(int users, double log2_field, std::span<const double> noise_entropy) {
    RateRegion region;
    region.dims = users;
    region.source = "cut-set bound";
    for (int i = 0; i < users; ++i) {
        region.constraints.push_back(
            complement_constraint(users, i, log2_field - noise_entropy[0]));
        region.constraints.push_back(
            complement_constraint(users, i, log2_field - noise_entropy[std::size_t(i) + 1]));
    }
    return region;
}

RateRegion cut_set_bound(const MwrcConfig& config) {
    const auto h = entropies_of(config);
    return cut_set_bound(config.users(), std::log2(double(config.field.order())), h);
}

RateRegion capacity_region(int users, double log2_field, std::span<const double> noise_entropy) {
    RateRegion region;
    region.dims = users;
    region.source = "capacity region";
    for (int i = 0; i < users; ++i) {
        const double bound =
            log2_field - std::max(noise_entropy[0], noise_entropy[std::size_t(i) + 1]);
        region.constraints.push_back(complement_constraint(users, i, bound));
    }
    return region;
}

RateRegion capacity_region(const MwrcConfig& config) {
    const auto h = entropies_of(config);
    return capacity_region(config.users(), std::log2(double(config.field.order())), h);
}

double common_rate_capacity(int users, double log2_field, std::span<const double> noise_entropy) {
    double worst = 0.0;
    for (double h : noise_entropy) worst = std::max(worst, h);
    return std::max(0.0, (log2_field - worst) / (users - 1));
}

double common_rate_capacity(const MwrcConfig& config) {
    const auto h = entropies_of(config);
    return common_rate_capacity(config.users(), std::log2(double(config.field.order())), h);
}

RateRegion binary_capacity_region(double rho0, double rho1, double rho2) {
    const double h[] = {binary_entropy(rho0), binary_entropy(rho1), binary_entropy(rho2)};
    return capacity_region(2, 1.0, h);
}

RateRegion cdf_region(double rho0, double rho1, double rho2) {
    RateRegion region;
    region.dims = 2;
    region.source = "joint-decoding relay region";
    region.constraints.push_back({{1.0, 0.0}, 1.0 - binary_entropy(rho2)});
    region.constraints.push_back({{0.0, 1.0}, 1.0 - binary_entropy(rho1)});
    region.constraints.push_back({{1.0, 1.0}, 1.0 - binary_entropy(rho0)});
    return region;
}

std::vector<FdfSeparateRegion::Corner> FdfSeparateRegion::sweep(double rho0, double rho1,
                                                                double rho2, int steps) {
    const double h0 = binary_entropy(rho0);
    const double h1 = binary_entropy(rho1);
    const double h2 = binary_entropy(rho2);

    std::vector<Corner> corners;
    corners.reserve(std::size_t(steps) * 2);
    for (int s = 0; s < steps; ++s) {
        const double beta = 0.5 * double(s) / double(steps - 1);

        // R1-led sub-region: points (R1, R1 + R2') under three constraints.
        {
            const double c1 = 1.0 - binary_entropy(beta * (1.0 - rho2) + (1.0 - beta) * rho2);
            const double c2 = binary_entropy(beta * (1.0 - rho1) + (1.0 - beta) * rho1) - h1;
            const double c3 = 1.0 - std::max(h0, h1);
            const double a = std::min(c1, c3);
            const double b = std::min(c3, c1 + c2);
            corners.push_back({a, b});
        }
        // R2-led sub-region with the roles of the users swapped. Its first
        // bound is taken symmetric to the R1-led form.
        {
            const double d1 = 1.0 - binary_entropy(beta * (1.0 - rho1) + (1.0 - beta) * rho1);
            const double d2 = binary_entropy(beta * (1.0 - rho2) + (1.0 - beta) * rho2) - h2;
            const double d3 = 1.0 - std::max(h0, h2);
            const double a = std::min(d1, d3);
            const double b = std::min(d3, d1 + d2);
            corners.push_back({b, a});  // (R2 + R1', R2) lives on the R1 axis first
        }
    }
    return corners;
}

namespace {

// Andrew's monotone chain; returns the hull counter-clockwise.
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Upper-right frontier: hull vertices that are not dominated by another
// vertex, ordered by increasing x.
std::vector<std::array<double, 2>> pareto_frontier(
    const std::vector<std::array<double, 2>>& pts) {
    std::vector<std::array<double, 2>> sorted(pts);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::array<double, 2>> out;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (out.empty() || (*it)[1] > out.back()[1] + 1e-15) out.push_back(*it);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double frontier_height(const std::vector<std::array<double, 2>>& frontier, double x) {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < frontier.size(); ++i) {
        const auto& p = frontier[i];
        const auto& q = frontier[i + 1];
        if (x >= p[0] - 1e-12 && x <= q[0] + 1e-12 && q[0] > p[0]) {
            const double t = (x - p[0]) / (q[0] - p[0]);
            best = std::max(best, p[1] + t * (q[1] - p[1]));
        }
    }
    if (!frontier.empty() && x <= frontier.front()[0] + 1e-12) {
        best = std::max(best, frontier.front()[1]);
    }
    return best;
}

// Closes a frontier into a boundary polyline running from the R2 axis to the
// R1 axis.
void close_to_axes(std::vector<std::array<double, 2>>& frontier) {
    if (frontier.empty()) return;
    if (frontier.front()[0] > 0.0) frontier.insert(frontier.begin(), {0.0, frontier.front()[1]});
    if (frontier.back()[1] > 0.0) frontier.push_back({frontier.back()[0], 0.0});
}

std::vector<std::array<double, 2>> hull_frontier(
    const std::vector<FdfSeparateRegion::Corner>& corners) {
    std::vector<std::array<double, 2>> pts;
    pts.push_back({0.0, 0.0});
    double max1 = 0.0, max2 = 0.0;
    for (const auto& c : corners) {
        pts.push_back({c.r1, c.r2});
        max1 = std::max(max1, c.r1);
        max2 = std::max(max2, c.r2);
    }
    // axis feet close the region downward
    pts.push_back({max1, 0.0});
    pts.push_back({0.0, max2});
    auto frontier = pareto_frontier(convex_hull(std::move(pts)));
    close_to_axes(frontier);
    return frontier;
}

}  // namespace

FdfSeparateRegion::FdfSeparateRegion(double rho0, double rho1, double rho2, int beta_steps)
    : steps_(beta_steps) {
    if (beta_steps < 2) throw OutOfRangeError("need at least two sweep steps");
    for (double rho : {rho0, rho1, rho2}) {
        if (!(rho >= 0.0) || rho > 0.5) {
            throw OutOfRangeError("crossover probabilities must lie in [0, 1/2]");
        }
    }
    corners_ = sweep(rho0, rho1, rho2, beta_steps);
    frontier_ = hull_frontier(corners_);

    const auto fine = hull_frontier(sweep(rho0, rho1, rho2, 2 * beta_steps - 1));
    double deviation = 0.0;
    const double max1 = frontier_.empty() ? 0.0 : frontier_.back()[0];
    for (int i = 0; i <= 256; ++i) {
        const double x = max1 * double(i) / 256.0;
        deviation = std::max(deviation,
                             std::abs(frontier_height(fine, x) - frontier_height(frontier_, x)));
    }
    grid_warning_ = deviation > 1e-4;
}

bool FdfSeparateRegion::contains(double r1, double r2) const {
    constexpr double tol = RateRegion::kSlack;
    if (!(r1 >= -tol) || !(r2 >= -tol)) return false;
    for (const Corner& c : corners_) {
        if (r1 <= c.r1 + tol && r2 <= c.r2 + tol) return true;
    }
    return false;
}

bool lemma_fdf_separate_optimal(double rho0, double rho1, double rho2) {
    if (rho0 >= std::max(rho1, rho2)) return true;
    return std::abs(rho1 - rho2) <= 1e-12;
}

bool lemma_cdf_optimal(double rho0, double rho1, double rho2) {
    return binary_entropy(rho0) <= binary_entropy(rho1) + binary_entropy(rho2) - 1.0;
}

std::vector<PhaseCell> phase_diagram(double rho0, int grid) {
    if (grid < 2) throw OutOfRangeError("phase grid needs at least two points per axis");
    std::vector<PhaseCell> cells;
    cells.reserve(std::size_t(grid) * std::size_t(grid));
    for (int i = 0; i < grid; ++i) {
        const double rho1 = 0.5 * double(i) / double(grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double rho2 = 0.5 * double(j) / double(grid - 1);
            PhaseCell cell;
            cell.rho1 = rho1;
            cell.rho2 = rho2;
            cell.fdf_separate_optimal = lemma_fdf_separate_optimal(rho0, rho1, rho2);
            cell.cdf_optimal = lemma_cdf_optimal(rho0, rho1, rho2);
            cells.push_back(cell);
        }
    }
    return cells;
}

bool region_convexity_check(const std::function<bool(std::span<const double>)>& member, int dims,
                            std::span<const double> box_high, int samples, Rng& rng,
                            std::vector<double>* witness) {
    std::vector<std::vector<double>> members;
    const int target = std::max(2, std::min(samples, 512));
    for (int attempt = 0; attempt < 200 * target && static_cast<int>(members.size()) < target;
         ++attempt) {
        std::vector<double> p(static_cast<std::size_t>(dims));
        for (int d = 0; d < dims; ++d) p[std::size_t(d)] = rng.canonical() * box_high[std::size_t(d)];
        if (member(p)) members.push_back(std::move(p));
    }
    {
        // the origin belongs to every non-negative region; keeps degenerate
        // regions (a single point) from going unsampled
        std::vector<double> origin(std::size_t(dims), 0.0);
        if (member(origin)) members.push_back(std::move(origin));
    }
    if (members.size() < 2) return true;  // nothing to falsify

    for (int s = 0; s < samples; ++s) {
        const auto& a = members[rng.below(members.size())];
        const auto& b = members[rng.below(members.size())];
        const double lambda = rng.canonical();
        std::vector<double> mix(static_cast<std::size_t>(dims));
        for (int d = 0; d < dims; ++d) {
            mix[std::size_t(d)] = lambda * a[std::size_t(d)] + (1.0 - lambda) * b[std::size_t(d)];
        }
        if (!member(mix)) {
            if (witness) *witness = mix;
            return false;
        }
    }
    return true;
}

bool region_convexity_check(const RateRegion& region, int samples, Rng& rng,
                            std::vector<double>* witness) {
    std::vector<double> high(std::size_t(region.dims), 0.0);
    for (const HalfSpace& h : region.constraints) {
        for (int d = 0; d < region.dims; ++d) {
            if (h.coeff[std::size_t(d)] > 0.0) {
                high[std::size_t(d)] = std::max(high[std::size_t(d)], h.bound / h.coeff[std::size_t(d)]);
            }
        }
    }
    for (double& h : high) h = std::max(h, 1e-9) * 1.05;  // a little slack around the region
    auto member = [&](std::span<const double> r) { return region.contains(r); };
    return region_convexity_check(member, region.dims, high, samples, rng, witness);
}

std::vector<std::array<double, 2>> region_frontier_2d(const RateRegion& region) {
    if (region.dims != 2) throw BadDimensionsError("frontier export needs a two-user region");

    // Maximum feasible r2 for a given r1 (and the transpose), traced at the
    // constraint breakpoints: every vertex of the polygon shows up as an
    // intersection of two active constraints or a constraint with an axis.
    auto max_r2_at = [&](double r1) {
        double best = std::numeric_limits<double>::infinity();
        for (const HalfSpace& h : region.constraints) {
            if (h.coeff[1] > 0.0) {
                best = std::min(best, (h.bound - h.coeff[0] * r1) / h.coeff[1]);
            } else if (h.coeff[0] > 0.0 && h.coeff[0] * r1 > h.bound + RateRegion::kSlack) {
                return -1.0;  // r1 itself infeasible
            }
        }
        return std::max(0.0, best == std::numeric_limits<double>::infinity() ? 0.0 : best);
    };

    // collect candidate r1 breakpoints
    std::vector<double> xs{0.0};
    for (const HalfSpace& a : region.constraints) {
        if (a.coeff[0] > 0.0 && a.coeff[1] == 0.0) xs.push_back(a.bound / a.coeff[0]);
    }
    for (const HalfSpace& a : region.constraints) {
        for (const HalfSpace& b : region.constraints) {
            const double det = a.coeff[0] * b.coeff[1] - a.coeff[1] * b.coeff[0];
            if (std::abs(det) < 1e-12) continue;
            const double x = (a.bound * b.coeff[1] - b.bound * a.coeff[1]) / det;
            if (x >= 0.0) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             xs.end());

    std::vector<std::array<double, 2>> frontier;
    for (double x : xs) {
        const double y = max_r2_at(x);
        if (y < 0.0) continue;
        std::array<double, 2> p{x, y};
        if (!region.contains(std::span<const double>(p.data(), 2))) continue;
        frontier.push_back(p);
    }
    close_to_axes(frontier);
    return frontier;
}

}  // namespace mwrc

#include "mwrc/prob.hpp"

#include <cmath>

namespace mwrc {

NoisePmf::NoisePmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidPmfError("empty pmf");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || p > 1.0) {
            throw InvalidPmfError("pmf entry " + std::to_string(p) + " outside [0, 1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidPmfError("pmf sums to " + std::to_string(sum) + ", not 1");
    }
    for (double& p : probs_) p /= sum;
}

NoisePmf NoisePmf::scaled(const Field& field, Field::Elem c) const {
    if (order() != field.order()) throw InvalidPmfError("pmf size does not match field order");
    if (c == field.zero()) throw InvalidPmfError("scaling a pmf by the additive identity");
    // P(cN = e) = P(N = c^{-1} e)
    const Field::Elem cinv = field.inv(c);
    std::vector<double> out(order());
    for (std::size_t e = 0; e < order(); ++e) {
        out[e] = probs_[field.mul(cinv, static_cast<Field::Elem>(e))];
    }
    return NoisePmf(std::move(out));
}

NoisePmf NoisePmf::point_mass(std::size_t order, std::size_t elem) {
    std::vector<double> p(order, 0.0);
    p.at(elem) = 1.0;
    return NoisePmf(std::move(p));
}

NoisePmf NoisePmf::uniform(std::size_t order) {
    std::vector<double> p(order, 1.0 / static_cast<double>(order));
    return NoisePmf(std::move(p));
}

NoisePmf NoisePmf::from_crossover(double rho) {
    if (!(rho >= 0.0) || rho > 1.0) {
        throw OutOfRangeError("crossover probability " + std::to_string(rho) + " outside [0, 1]");
    }
    return NoisePmf({1.0 - rho, rho});
}

double entropy_bits(const NoisePmf& pmf) {
    double h = 0.0;
    for (std::size_t i = 0; i < pmf.order(); ++i) {
        const double p = pmf[i];
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double binary_entropy(double rho) {
    if (!(rho >= 0.0) || rho > 1.0) {
        throw OutOfRangeError("binary entropy argument " + std::to_string(rho) +
                              " outside [0, 1]");
    }
    if (rho == 0.0 || rho == 1.0) return 0.0;
    return -rho * std::log2(rho) - (1.0 - rho) * std::log2(1.0 - rho);
}

Field::Elem sample(const NoisePmf& pmf, Rng& rng) {
    const double u = rng.canonical();
    double acc = 0.0;
    const std::size_t last = pmf.order() - 1;
    for (std::size_t e = 0; e < last; ++e) {
        acc += pmf[e];
        if (u < acc) return static_cast<Field::Elem>(e);
    }
    return static_cast<Field::Elem>(last);
}

}  // namespace mwrc

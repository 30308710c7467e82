#pragma once

#include <vector>

#include "mwrc/errors.hpp"
#include "mwrc/field.hpp"
#include "mwrc/rng.hpp"

namespace mwrc {

/// Probability mass function over the elements of a field, indexed by the
/// element encoding. Probabilities must lie in [0, 1]; a total within 1e-9 of
/// one is renormalized at construction, anything further off is rejected.
class NoisePmf {
public:
    explicit NoisePmf(std::vector<double> probs);

    std::size_t order() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    /// Distribution of (c ⊙ N) for N with this pmf.
    NoisePmf scaled(const Field& field, Field::Elem c) const;

    static NoisePmf point_mass(std::size_t order, std::size_t elem);
    static NoisePmf uniform(std::size_t order);

    /// Binary convenience: {1-rho, rho} over GF(2).
    static NoisePmf from_crossover(double rho);

private:
    std::vector<double> probs_;
};

/// Shannon entropy in bits, with 0*log(0) = 0.
double entropy_bits(const NoisePmf& pmf);

/// -rho*log2(rho) - (1-rho)*log2(1-rho); zero at both endpoints.
double binary_entropy(double rho);

/// Inverse-CDF draw over the element encoding order. Identical generator
/// state always yields the identical element.
Field::Elem sample(const NoisePmf& pmf, Rng& rng);

}  // namespace mwrc

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsel/distribution.hpp"
#include "hsel/rng.hpp"

namespace hsel {

// Lower-bound family for mixtures. The domain of size d = 2 n k l is cut
// into 2n blocks of k intervals of length l each. H_i puts (1 + beta)/d on
// block 2i - 1, (1 - beta)/d on block 2i and 1/d elsewhere (blocks counted
// from 1), with beta = 1/(l - 1). P_i is H_i with one random element of each
// interval in block 2i - 1 set to 0 and one of each interval in block 2i
// set to 2/d.
struct HardExpectedInstance {
    std::size_t n = 0, k = 0, ell = 0, d = 0;
    double beta = 0.0;
    std::vector<DiscreteDistribution> hypotheses;

    // Start of interval v (0-based) of block u (0-based).
    std::size_t interval_start(std::size_t u, std::size_t v) const { return (u * k + v) * ell; }
    std::size_t interval_of(std::size_t x) const { return x / ell; }

    DiscreteDistribution sample_truth(std::size_t i, Rng& rng) const;

    double tv_own() const { return static_cast<double>(k) * (1.0 + beta) / static_cast<double>(d); }
    double tv_other() const { return static_cast<double>(k) * (3.0 + beta) / static_cast<double>(d); }
};

HardExpectedInstance gen_hard_expected(std::size_t n, std::size_t k, std::size_t ell);

// Monte Carlo frequency with which s draws from a random P_i land twice in
// the same interval.
double collision_probability(const HardExpectedInstance& inst, std::size_t s, std::size_t trials,
                             std::uint64_t seed);

// Pair (2t, 2t+1) gets ((1 + eps)/k, (1 - eps)/k) when bit t is clear and
// the swap when it is set. k must be even and eps in [0, 1].
DiscreteDistribution gen_paired_member(std::size_t k_dom, double eps, const std::vector<bool>& bits);
DiscreteDistribution gen_paired_member(std::size_t k_dom, double eps, std::uint64_t mask);
std::vector<bool> random_mask(std::size_t bits, Rng& rng);

struct PlantedInstance {
    std::vector<DiscreteDistribution> hypotheses;
    DiscreteDistribution truth;
    std::size_t base = 0;       // hypothesis the truth was perturbed from
    std::size_t opt_index = 0;  // lowest index attaining opt
    double opt = 0.0;
};

// n flat-Dirichlet hypotheses on d points; the truth is a mixture of a random
// hypothesis with fresh noise, at distance target_opt from it.
PlantedInstance gen_planted(std::size_t n, std::size_t d, double target_opt, std::uint64_t seed);

}  // namespace hsel

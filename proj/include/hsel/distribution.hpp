#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsel/rng.hpp"

namespace hsel {

class QueryCounter;

// Probability vector over {0, ..., d-1}. Entries are nonnegative and sum to
// 1 within 1e-9; construction rejects anything else.
class DiscreteDistribution {
public:
    static constexpr double kSumTolerance = 1e-9;

    DiscreteDistribution() = default;
    explicit DiscreteDistribution(std::vector<double> probs);

    // Scales a nonnegative vector with positive sum to a distribution.
    static DiscreteDistribution normalized(std::vector<double> weights);

    std::size_t domain_size() const { return probs_.size(); }
    double operator[](std::size_t x) const { return probs_[x]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Multiset of i.i.d. draws, kept with its histogram over the domain.
struct SampleSet {
    std::vector<std::uint32_t> elements;
    std::vector<std::uint32_t> histogram;
    std::uint64_t source_seed = 0;

    std::size_t size() const { return elements.size(); }
};

SampleSet make_sample(std::vector<std::uint32_t> elements, std::size_t domain_size,
                      std::uint64_t source_seed = 0);

// Draws s elements from p. Each draw is charged to `counter` when given.
SampleSet draw_sample(const DiscreteDistribution& p, std::size_t s, std::uint64_t seed,
                      QueryCounter* counter = nullptr);

// Number of draws needed for all n(n-1) semi-distances to be eps-accurate
// simultaneously with probability 1 - delta.
std::size_t harness_sample_size(std::size_t n, double eps, double delta);

// Single-pair sample size.
std::size_t pair_sample_size(double eps, double delta);

}  // namespace hsel

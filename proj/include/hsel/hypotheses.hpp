#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "hsel/distribution.hpp"

namespace hsel {

// Oracle operation counter. Increments saturate instead of wrapping; the
// count never decreases.
class QueryCounter {
public:
    void add(std::uint64_t k);
    std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }

private:
    std::atomic<std::uint64_t> count_{0};
};

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

// Candidate hypotheses over a shared domain, with the Scheffe-set oracle.
//
// scheffe_mass(k, i, j) = H_k(S_{i->j}) where S_{i->j} = {x : H_i(x) < H_j(x)}
// for i < j and {x : H_i(x) <= H_j(x)} for i > j. Every call, cached or not,
// counts one query. The cache is safe for concurrent readers.
class HypothesisSet {
public:
    explicit HypothesisSet(std::vector<DiscreteDistribution> hyps);
    ~HypothesisSet();
    HypothesisSet(HypothesisSet&&) noexcept;
    HypothesisSet& operator=(HypothesisSet&&) noexcept;

    std::size_t size() const { return hyps_.size(); }
    std::size_t domain_size() const { return d_; }
    const DiscreteDistribution& operator[](std::size_t i) const { return hyps_[i]; }
    const std::vector<DiscreteDistribution>& hypotheses() const { return hyps_; }

    bool in_scheffe_set(std::size_t i, std::size_t j, std::size_t x) const {
        double a = hyps_[i][x], b = hyps_[j][x];
        return i < j ? a < b : a <= b;
    }
    std::vector<std::uint32_t> scheffe_set(std::size_t i, std::size_t j) const;
    double scheffe_mass(std::size_t k, std::size_t i, std::size_t j) const;

    QueryCounter& counter() const { return *counter_; }
    std::uint64_t queries() const { return counter_->value(); }

private:
    struct Cache;
    std::vector<DiscreteDistribution> hyps_;
    std::size_t d_ = 0;
    std::unique_ptr<QueryCounter> counter_;
    std::unique_ptr<Cache> cache_;
};

// Brute-force best hypothesis: lowest index among those at minimum distance.
struct BestHypothesis {
    std::size_t index;
    double distance;
};
BestHypothesis best_hypothesis(const HypothesisSet& h, const DiscreteDistribution& p);

}  // namespace hsel

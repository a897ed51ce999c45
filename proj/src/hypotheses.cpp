#include "hsel/hypotheses.hpp"

#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "hsel/error.hpp"

namespace hsel {

void QueryCounter::add(std::uint64_t k) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t cur = count_.load(std::memory_order_relaxed);
    for (;;) {
        std::uint64_t next = cur > kMax - k ? kMax : cur + k;
        if (count_.compare_exchange_weak(cur, next, std::memory_order_relaxed)) return;
    }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

struct HypothesisSet::Cache {
    mutable std::shared_mutex mu;
    std::unordered_map<std::uint64_t, double> mass;
};

HypothesisSet::HypothesisSet(std::vector<DiscreteDistribution> hyps)
    : hyps_(std::move(hyps)),
      counter_(std::make_unique<QueryCounter>()),
      cache_(std::make_unique<Cache>()) {
    if (hyps_.empty()) fail(ErrorKind::InvalidArgument, "hypothesis set is empty");
    d_ = hyps_[0].domain_size();
    for (const auto& h : hyps_)
        if (h.domain_size() != d_)
            fail(ErrorKind::DomainMismatch, "hypotheses have different domain sizes");
}

HypothesisSet::~HypothesisSet() = default;
HypothesisSet::HypothesisSet(HypothesisSet&&) noexcept = default;
HypothesisSet& HypothesisSet::operator=(HypothesisSet&&) noexcept = default;

std::vector<std::uint32_t> HypothesisSet::scheffe_set(std::size_t i, std::size_t j) const {
    require(i < size() && j < size(), "scheffe_set: index out of range");
    require(i != j, "scheffe_set: needs i != j");
    std::vector<std::uint32_t> out;
    for (std::size_t x = 0; x < d_; ++x)
        if (in_scheffe_set(i, j, x)) out.push_back(static_cast<std::uint32_t>(x));
    return out;
}

double HypothesisSet::scheffe_mass(std::size_t k, std::size_t i, std::size_t j) const {
    const std::size_t n = size();
    require(k < n && i < n && j < n, "scheffe_mass: index out of range");
    require(i != j, "scheffe_mass: needs i != j");
    counter_->add(1);
    const std::uint64_t key = (static_cast<std::uint64_t>(k) * n + i) * n + j;
    {
        std::shared_lock lock(cache_->mu);
        auto it = cache_->mass.find(key);
        if (it != cache_->mass.end()) return it->second;
    }
    double m = 0.0;
    const auto& hk = hyps_[k];
    for (std::size_t x = 0; x < d_; ++x)
        if (in_scheffe_set(i, j, x)) m += hk[x];
    std::unique_lock lock(cache_->mu);
    cache_->mass.emplace(key, m);
    return m;
}

BestHypothesis best_hypothesis(const HypothesisSet& h, const DiscreteDistribution& p) {
    BestHypothesis best{0, total_variation(h[0], p)};
    for (std::size_t i = 1; i < h.size(); ++i) {
        double t = total_variation(h[i], p);
        if (t < best.distance) best = {i, t};
    }
    return best;
}

}  // namespace hsel

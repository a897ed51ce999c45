#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "hsel/distribution.hpp"
#include "hsel/hypotheses.hpp"

namespace hsel {

enum class TableMode { Exact, Empirical, Matrix };

// w_{i->j} = |H_j(S_{i->j}) - P(S_{i->j})|. One scheffe_mass query.
double semi_distance_exact(const HypothesisSet& h, const DiscreteDistribution& p,
                           std::size_t i, std::size_t j);

// Empirical version with P(S_{i->j}) replaced by the sample frequency.
// Charges one scheffe_mass query plus one comparison per sample point.
double estimate_semi_distance(const SampleSet& sample, const HypothesisSet& h,
                              std::size_t i, std::size_t j);

// On-demand semi-distances. Every query(i, j) with i != j is charged to the
// counter at the cost of evaluating it from scratch (1 for exact and matrix
// tables, 1 + s for empirical ones), even though values are memoized
// internally. peek() reads the same value without charging; algorithms use
// it only where they charge the equivalent literal cost themselves.
//
// Not thread-safe; use one oracle per thread.
class SemiDistanceOracle {
public:
    SemiDistanceOracle(const HypothesisSet& h, const DiscreteDistribution& p);
    SemiDistanceOracle(const HypothesisSet& h, const SampleSet& sample);
    // Fixed values with unit cost per query, charged to an internal counter.
    explicit SemiDistanceOracle(std::vector<std::vector<double>> values);

    std::size_t size() const { return n_; }
    TableMode mode() const { return mode_; }
    std::size_t samples_used() const { return sample_ ? sample_->size() : 0; }
    std::uint64_t cost_per_query() const { return cost_; }

    double query(std::size_t i, std::size_t j) {
        if (i == j) return 0.0;
        counter_->add(cost_);
        return peek(i, j);
    }
    double peek(std::size_t i, std::size_t j);

    // Charges k queries.
    void charge(std::uint64_t k) { counter_->add(saturating_mul(k, cost_)); }

    QueryCounter& counter() { return *counter_; }
    std::uint64_t queries() const { return counter_->value(); }
    const HypothesisSet* hypotheses() const { return h_; }

private:
    double compute(std::size_t i, std::size_t j) const;

    TableMode mode_;
    std::size_t n_ = 0;
    const HypothesisSet* h_ = nullptr;
    const DiscreteDistribution* p_ = nullptr;
    const SampleSet* sample_ = nullptr;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> support_;  // (x, count)
    std::uint64_t cost_ = 1;
    std::vector<double> memo_;
    std::unique_ptr<QueryCounter> own_counter_;
    QueryCounter* counter_ = nullptr;
};

// All n(n-1) ordered semi-distances, stored. Reads are free; building
// through an oracle charges every entry once.
class SemiDistanceTable {
public:
    SemiDistanceTable() = default;
    SemiDistanceTable(std::vector<std::vector<double>> values, TableMode mode);

    std::size_t size() const { return n_; }
    TableMode mode() const { return mode_; }
    double operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }

    // W(H_j) = max_i w_{i->j}.
    double column_max(std::size_t j) const;
    std::vector<double> column_maxima() const;

private:
    std::size_t n_ = 0;
    TableMode mode_ = TableMode::Matrix;
    std::vector<double> w_;
};

SemiDistanceTable build_table(SemiDistanceOracle& oracle);
SemiDistanceTable build_table(const HypothesisSet& h, const DiscreteDistribution& p);
SemiDistanceTable build_table(const HypothesisSet& h, const SampleSet& sample);

}  // namespace hsel

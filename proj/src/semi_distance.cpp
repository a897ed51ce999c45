#include "hsel/semi_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsel/error.hpp"

namespace hsel {

namespace {

void check_pair(std::size_t n, std::size_t i, std::size_t j) {
    require(i < n && j < n, "semi-distance: index out of range");
}

}  // namespace

double semi_distance_exact(const HypothesisSet& h, const DiscreteDistribution& p,
                           std::size_t i, std::size_t j) {
    check_pair(h.size(), i, j);
    if (p.domain_size() != h.domain_size())
        fail(ErrorKind::DomainMismatch, "true distribution domain differs from hypotheses");
    if (i == j) return 0.0;
    double hj = h.scheffe_mass(j, i, j);
    double ps = 0.0;
    for (std::size_t x = 0; x < h.domain_size(); ++x)
        if (h.in_scheffe_set(i, j, x)) ps += p[x];
    return std::abs(hj - ps);
}

double estimate_semi_distance(const SampleSet& sample, const HypothesisSet& h,
                              std::size_t i, std::size_t j) {
    check_pair(h.size(), i, j);
    if (sample.size() == 0) fail(ErrorKind::EmptySample, "empty sample");
    if (sample.histogram.size() != h.domain_size())
        fail(ErrorKind::DomainMismatch, "sample domain differs from hypotheses");
    if (i == j) return 0.0;
    double hj = h.scheffe_mass(j, i, j);
    std::size_t hits = 0;
    for (auto x : sample.elements)
        if (h.in_scheffe_set(i, j, x)) ++hits;
    h.counter().add(sample.size());
    return std::abs(hj - static_cast<double>(hits) / static_cast<double>(sample.size()));
}

SemiDistanceOracle::SemiDistanceOracle(const HypothesisSet& h, const DiscreteDistribution& p)
    : mode_(TableMode::Exact), n_(h.size()), h_(&h), p_(&p), cost_(1),
      counter_(&h.counter()) {
    if (p.domain_size() != h.domain_size())
        fail(ErrorKind::DomainMismatch, "true distribution domain differs from hypotheses");
    memo_.assign(n_ * n_, std::numeric_limits<double>::quiet_NaN());
}

SemiDistanceOracle::SemiDistanceOracle(const HypothesisSet& h, const SampleSet& sample)
    : mode_(TableMode::Empirical), n_(h.size()), h_(&h), sample_(&sample),
      cost_(1 + sample.size()), counter_(&h.counter()) {
    if (sample.size() == 0) fail(ErrorKind::EmptySample, "empty sample");
    if (sample.histogram.size() != h.domain_size())
        fail(ErrorKind::DomainMismatch, "sample domain differs from hypotheses");
    for (std::size_t x = 0; x < sample.histogram.size(); ++x)
        if (sample.histogram[x] > 0)
            support_.emplace_back(static_cast<std::uint32_t>(x), sample.histogram[x]);
    memo_.assign(n_ * n_, std::numeric_limits<double>::quiet_NaN());
}

SemiDistanceOracle::SemiDistanceOracle(std::vector<std::vector<double>> values)
    : mode_(TableMode::Matrix), n_(values.size()), cost_(1),
      own_counter_(std::make_unique<QueryCounter>()) {
    counter_ = own_counter_.get();
    memo_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        require(values[i].size() == n_, "semi-distance matrix is not square");
        for (std::size_t j = 0; j < n_; ++j) memo_[i * n_ + j] = i == j ? 0.0 : values[i][j];
    }
}

double SemiDistanceOracle::peek(std::size_t i, std::size_t j) {
    check_pair(n_, i, j);
    double& slot = memo_[i * n_ + j];
    if (std::isnan(slot)) slot = i == j ? 0.0 : compute(i, j);
    return slot;
}

double SemiDistanceOracle::compute(std::size_t i, std::size_t j) const {
    const auto& hj = (*h_)[j];
    double mass = 0.0;
    if (mode_ == TableMode::Exact) {
        double ps = 0.0;
        for (std::size_t x = 0; x < h_->domain_size(); ++x)
            if (h_->in_scheffe_set(i, j, x)) {
                mass += hj[x];
                ps += (*p_)[x];
            }
        return std::abs(mass - ps);
    }
    for (std::size_t x = 0; x < h_->domain_size(); ++x)
        if (h_->in_scheffe_set(i, j, x)) mass += hj[x];
    std::uint64_t hits = 0;
    for (auto [x, c] : support_)
        if (h_->in_scheffe_set(i, j, x)) hits += c;
    return std::abs(mass - static_cast<double>(hits) / static_cast<double>(sample_->size()));
}

SemiDistanceTable::SemiDistanceTable(std::vector<std::vector<double>> values, TableMode mode)
    : n_(values.size()), mode_(mode) {
    w_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        require(values[i].size() == n_, "semi-distance matrix is not square");
        for (std::size_t j = 0; j < n_; ++j) w_[i * n_ + j] = i == j ? 0.0 : values[i][j];
    }
}

double SemiDistanceTable::column_max(std::size_t j) const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) m = std::max(m, (*this)(i, j));
    return m;
}

std::vector<double> SemiDistanceTable::column_maxima() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = column_max(j);
    return out;
}

SemiDistanceTable build_table(SemiDistanceOracle& oracle) {
    const std::size_t n = oracle.size();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) w[i][j] = oracle.query(i, j);
    return SemiDistanceTable(std::move(w), oracle.mode());
}

SemiDistanceTable build_table(const HypothesisSet& h, const DiscreteDistribution& p) {
    SemiDistanceOracle o(h, p);
    return build_table(o);
}

SemiDistanceTable build_table(const HypothesisSet& h, const SampleSet& sample) {
    SemiDistanceOracle o(h, sample);
    return build_table(o);
}

}  // namespace hsel

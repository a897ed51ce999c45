#include "hsel/distribution.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hsel/error.hpp"
#include "hsel/hypotheses.hpp"

namespace hsel {

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) fail(ErrorKind::InvalidDistribution, "empty distribution");
    double sum = 0.0;
    for (std::size_t x = 0; x < probs_.size(); ++x) {
        double v = probs_[x];
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(ErrorKind::InvalidDistribution,
                 "entry " + std::to_string(x) + " is negative or not finite");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        fail(ErrorKind::InvalidDistribution, "entries sum to " + std::to_string(sum));
}

DiscreteDistribution DiscreteDistribution::normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double v : weights) {
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(ErrorKind::InvalidDistribution, "negative or non-finite weight");
        sum += v;
    }
    if (!(sum > 0.0)) fail(ErrorKind::InvalidDistribution, "weights sum to zero");
    for (double& v : weights) v /= sum;
    return DiscreteDistribution(std::move(weights));
}

double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.domain_size() != q.domain_size())
        fail(ErrorKind::DomainMismatch, "total_variation: domain sizes differ");
    double s = 0.0;
    for (std::size_t x = 0; x < p.domain_size(); ++x) s += std::abs(p[x] - q[x]);
    return 0.5 * s;
}

SampleSet make_sample(std::vector<std::uint32_t> elements, std::size_t domain_size,
                      std::uint64_t source_seed) {
    SampleSet s;
    s.histogram.assign(domain_size, 0);
    for (auto x : elements) {
        if (x >= domain_size) fail(ErrorKind::DomainMismatch, "sample element outside domain");
        ++s.histogram[x];
    }
    s.elements = std::move(elements);
    s.source_seed = source_seed;
    return s;
}

SampleSet draw_sample(const DiscreteDistribution& p, std::size_t s, std::uint64_t seed,
                      QueryCounter* counter) {
    Rng rng(seed);
    std::discrete_distribution<std::uint32_t> dist(p.probs().begin(), p.probs().end());
    std::vector<std::uint32_t> elems(s);
    for (auto& e : elems) e = dist(rng);
    if (counter) counter->add(s);
    return make_sample(std::move(elems), p.domain_size(), seed);
}

std::size_t harness_sample_size(std::size_t n, double eps, double delta) {
    require(eps > 0 && delta > 0 && delta < 1 && n >= 1, "harness_sample_size: bad arguments");
    double nn = static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(48.0 * std::log(2.0 * nn * nn / delta) / (eps * eps)));
}

std::size_t pair_sample_size(double eps, double delta) {
    require(eps > 0 && delta > 0 && delta < 1, "pair_sample_size: bad arguments");
    return static_cast<std::size_t>(std::ceil(48.0 * std::log(1.0 / delta) / (eps * eps)));
}

}  // namespace hsel

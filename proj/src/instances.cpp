#include "hsel/instances.hpp"

#include <algorithm>
#include <random>

#include "hsel/error.hpp"
#include "hsel/hypotheses.hpp"

namespace hsel {

HardExpectedInstance gen_hard_expected(std::size_t n, std::size_t k, std::size_t ell) {
    require(n >= 2 && k >= 1, "gen_hard_expected: need n >= 2 and k >= 1");
    require(ell >= 2, "gen_hard_expected: interval length must be at least 2");
    HardExpectedInstance inst;
    inst.n = n;
    inst.k = k;
    inst.ell = ell;
    inst.d = 2 * n * k * ell;
    inst.beta = 1.0 / static_cast<double>(ell - 1);
    const double d = static_cast<double>(inst.d);
    const std::size_t block = k * ell;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(inst.d, 1.0 / d);
        for (std::size_t x = 2 * i * block; x < (2 * i + 1) * block; ++x) p[x] = (1.0 + inst.beta) / d;
        for (std::size_t x = (2 * i + 1) * block; x < (2 * i + 2) * block; ++x) p[x] = (1.0 - inst.beta) / d;
        inst.hypotheses.emplace_back(std::move(p));
    }
    return inst;
}

DiscreteDistribution HardExpectedInstance::sample_truth(std::size_t i, Rng& rng) const {
    require(i < n, "sample_truth: index out of range");
    std::vector<double> p = hypotheses[i].probs();
    std::uniform_int_distribution<std::size_t> offset(0, ell - 1);
    const double dd = static_cast<double>(d);
    for (std::size_t v = 0; v < k; ++v) {
        p[interval_start(2 * i, v) + offset(rng)] = 0.0;
        p[interval_start(2 * i + 1, v) + offset(rng)] = 2.0 / dd;
    }
    return DiscreteDistribution(std::move(p));
}

double collision_probability(const HardExpectedInstance& inst, std::size_t s, std::size_t trials,
                             std::uint64_t seed) {
    require(trials > 0, "collision_probability: need at least one trial");
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> which(0, inst.n - 1);
    const std::size_t intervals = inst.d / inst.ell;
    std::vector<std::uint32_t> stamp(intervals, 0);
    std::size_t hits = 0;
    for (std::size_t t = 1; t <= trials; ++t) {
        DiscreteDistribution p = inst.sample_truth(which(rng), rng);
        std::discrete_distribution<std::size_t> draw(p.probs().begin(), p.probs().end());
        const auto mark = static_cast<std::uint32_t>(t);
        for (std::size_t r = 0; r < s; ++r) {
            std::size_t iv = inst.interval_of(draw(rng));
            if (stamp[iv] == mark) {
                ++hits;
                break;
            }
            stamp[iv] = mark;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

DiscreteDistribution gen_paired_member(std::size_t k_dom, double eps, const std::vector<bool>& bits) {
    require(k_dom >= 2 && k_dom % 2 == 0, "gen_paired_member: domain size must be even");
    require(eps >= 0.0 && eps <= 1.0, "gen_paired_member: eps must lie in [0, 1]");
    require(bits.size() == k_dom / 2, "gen_paired_member: mask length must be k/2");
    const double kd = static_cast<double>(k_dom);
    std::vector<double> p(k_dom);
    for (std::size_t t = 0; t < k_dom / 2; ++t) {
        double hi = (1.0 + eps) / kd, lo = (1.0 - eps) / kd;
        p[2 * t] = bits[t] ? lo : hi;
        p[2 * t + 1] = bits[t] ? hi : lo;
    }
    return DiscreteDistribution(std::move(p));
}

DiscreteDistribution gen_paired_member(std::size_t k_dom, double eps, std::uint64_t mask) {
    const std::size_t m = k_dom / 2;
    require(m <= 64, "gen_paired_member: integer masks cover at most 64 pairs");
    require(m == 64 || (mask >> m) == 0, "gen_paired_member: mask has bits beyond k/2");
    std::vector<bool> bits(m);
    for (std::size_t t = 0; t < m; ++t) bits[t] = (mask >> t) & 1U;
    return gen_paired_member(k_dom, eps, bits);
}

std::vector<bool> random_mask(std::size_t bits, Rng& rng) {
    std::vector<bool> out(bits);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = 0; t < bits; ++t) out[t] = coin(rng);
    return out;
}

PlantedInstance gen_planted(std::size_t n, std::size_t d, double target_opt, std::uint64_t seed) {
    require(n >= 1 && d >= 2, "gen_planted: need n >= 1 and d >= 2");
    require(target_opt >= 0.0 && target_opt < 1.0, "gen_planted: target_opt must lie in [0, 1)");
    Rng rng(seed);
    std::exponential_distribution<double> expo(1.0);
    auto dirichlet = [&]() {
        std::vector<double> w(d);
        for (auto& x : w) x = expo(rng);
        return DiscreteDistribution::normalized(std::move(w));
    };
    PlantedInstance inst;
    for (std::size_t i = 0; i < n; ++i) inst.hypotheses.push_back(dirichlet());
    inst.base = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const auto& h = inst.hypotheses[inst.base];

    // P = (1 - lam) H + lam Q has tv(P, H) = lam tv(H, Q).
    DiscreteDistribution q = dirichlet();
    double reach = total_variation(h, q);
    if (reach < target_opt) {
        std::size_t low = static_cast<std::size_t>(
            std::min_element(h.probs().begin(), h.probs().end()) - h.probs().begin());
        std::vector<double> point(d, 0.0);
        point[low] = 1.0;
        q = DiscreteDistribution(std::move(point));
        reach = total_variation(h, q);
    }
    if (reach < target_opt) fail(ErrorKind::InvalidArgument, "gen_planted: target_opt is unreachable");
    const double lam = reach > 0.0 ? target_opt / reach : 0.0;
    std::vector<double> p(d);
    for (std::size_t x = 0; x < d; ++x) p[x] = (1.0 - lam) * h[x] + lam * q[x];
    inst.truth = lam > 0.0 ? DiscreteDistribution::normalized(std::move(p)) : h;

    HypothesisSet hs(inst.hypotheses);
    BestHypothesis best = best_hypothesis(hs, inst.truth);
    inst.opt_index = best.index;
    inst.opt = best.distance;
    return inst;
}

}  // namespace hsel

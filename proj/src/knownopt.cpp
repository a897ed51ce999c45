#include "hsel/knownopt.hpp"

#include <cmath>
#include <random>

#include "hsel/error.hpp"
#include "hsel/rng.hpp"

namespace hsel {

double lambda_fraction(SemiDistanceOracle& oracle, std::size_t j,
                       const std::vector<std::size_t>& probe, double threshold) {
    require(!probe.empty(), "lambda_fraction: empty probe set");
    std::size_t bad = 0;
    for (auto i : probe)
        if (oracle.query(i, j) > threshold) ++bad;
    return static_cast<double>(bad) / static_cast<double>(probe.size());
}

KnownOptResult select_known_opt(SemiDistanceOracle& oracle, double opt, double eps, double delta,
                                std::uint64_t seed) {
    const std::size_t n = oracle.size();
    require(n > 0, "select_known_opt: no hypotheses");
    require(opt >= 0.0, "select_known_opt: opt must be nonnegative");
    require(eps > 0.0 && delta > 0.0 && delta < 1.0, "select_known_opt: bad eps or delta");
    const auto before = oracle.queries();
    KnownOptResult res;
    res.samples_used = oracle.samples_used();
    if (n == 1) return res;

    const double nd = static_cast<double>(n);
    const double threshold = opt + eps / 2.0;
    const double delta0 = delta / 3.0;
    const auto cap = static_cast<std::size_t>(std::ceil(std::log2(nd))) + 1;
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> other(0, n - 2);

    std::vector<std::size_t> candidates(n);
    for (std::size_t j = 0; j < n; ++j) candidates[j] = j;

    auto halt = [&](std::size_t k) {
        if (k == 1)
            fail(ErrorKind::OptInfeasible, "no hypothesis passes the first round; opt is too small");
        res.branch = KnownOptResult::Halt;
        res.chosen = res.pivots.back();
    };

    for (std::size_t k = 1;; ++k) {
        res.rounds = k;
        if (k > cap) {
            halt(k);
            break;
        }
        const double sk = std::ceil(48.0 * std::ldexp(1.0, static_cast<int>(k)) * std::log(nd / delta0));
        const auto probes = static_cast<std::size_t>(sk);
        const double allowed = std::ldexp(1.0, -static_cast<int>(k + 1));
        std::vector<std::size_t> probe(probes);
        bool found = false;
        std::size_t pivot = 0;
        for (auto j : candidates) {
            for (auto& i : probe) {
                i = other(rng);
                if (i >= j) ++i;
            }
            if (lambda_fraction(oracle, j, probe, threshold) <= allowed) {
                found = true;
                pivot = j;
                break;
            }
        }
        if (!found) {
            halt(k);
            break;
        }
        res.pivots.push_back(pivot);
        std::vector<std::size_t> next;
        for (std::size_t i = 0; i < n; ++i)
            if (i != pivot && oracle.query(i, pivot) > threshold) next.push_back(i);
        if (next.empty()) {
            res.branch = KnownOptResult::EmptySet;
            res.chosen = pivot;
            break;
        }
        candidates = std::move(next);
    }
    res.queries = oracle.queries() - before;
    return res;
}

}  // namespace hsel

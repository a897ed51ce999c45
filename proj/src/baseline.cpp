#include "hsel/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hsel/error.hpp"

namespace hsel {

std::size_t select_min_w(const SemiDistanceTable& table) {
    require(table.size() > 0, "select_min_w: empty table");
    std::size_t best = 0;
    double best_w = table.column_max(0);
    for (std::size_t j = 1; j < table.size(); ++j) {
        double w = table.column_max(j);
        if (w < best_w) {
            best_w = w;
            best = j;
        }
    }
    return best;
}

SelectorResult select_min_w(SemiDistanceOracle& oracle) {
    const auto before = oracle.queries();
    SelectorResult r;
    r.chosen = select_min_w(build_table(oracle));
    r.queries = oracle.queries() - before;
    r.samples_used = oracle.samples_used();
    return r;
}

std::vector<std::pair<std::size_t, std::size_t>> mlw_pair_order(const HypothesisSet& h) {
    const std::size_t n = h.size();
    struct Entry {
        double tv;
        std::size_t i, j;
    };
    std::vector<Entry> e;
    e.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.push_back({total_variation(h[i], h[j]), i, j});
    std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
        if (a.tv != b.tv) return a.tv > b.tv;
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(e.size());
    for (const auto& x : e) out.emplace_back(x.i, x.j);
    return out;
}

namespace {

void check_order(const HypothesisSet& h,
                 const std::vector<std::pair<std::size_t, std::size_t>>& order) {
    if (order != mlw_pair_order(h))
        fail(ErrorKind::InvalidArgument, "select_mlw: malformed pair order");
}

template <class Loser>
std::size_t run_mlw(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& order,
                    Loser&& loser) {
    std::vector<char> alive(n, 1);
    std::size_t left = n;
    for (auto [i, j] : order) {
        if (left == 1) break;
        if (!alive[i] || !alive[j]) continue;
        alive[loser(i, j)] = 0;
        --left;
    }
    return static_cast<std::size_t>(std::find(alive.begin(), alive.end(), 1) - alive.begin());
}

}  // namespace

std::size_t select_mlw(const HypothesisSet& h, const SemiDistanceTable& table,
                       const std::vector<std::pair<std::size_t, std::size_t>>& order) {
    require(table.size() == h.size(), "select_mlw: table size differs from hypothesis count");
    check_order(h, order);
    return run_mlw(h.size(), order,
                   [&](std::size_t i, std::size_t j) { return comparison_loser(table, i, j); });
}

SelectorResult select_mlw(SemiDistanceOracle& oracle,
                          const std::vector<std::pair<std::size_t, std::size_t>>& order) {
    const HypothesisSet* h = oracle.hypotheses();
    require(h != nullptr, "select_mlw: oracle has no hypothesis set");
    check_order(*h, order);
    const auto before = oracle.queries();
    SelectorResult r;
    r.chosen = run_mlw(h->size(), order,
                       [&](std::size_t i, std::size_t j) { return comparison_loser(oracle, i, j); });
    r.queries = oracle.queries() - before;
    r.samples_used = oracle.samples_used();
    return r;
}

double quantile_threshold(std::vector<double> values, std::size_t allowed) {
    if (values.size() <= allowed) return 0.0;
    std::sort(values.begin(), values.end(), std::greater<>());
    // Count of values >= values[r] is one past the last index equal to it.
    // Walk up from the cutoff to the first tie group lying entirely within it.
    std::size_t r = allowed;  // values[allowed] is the first value that must fall below
    if (r == 0) return values[0];
    std::size_t k = r - 1;
    while (k > 0 && values[k] == values[r]) --k;
    if (values[k] == values[r]) return values[0];  // one tie group spans the cutoff
    return values[k];
}

QuantileResult select_quantile(SemiDistanceOracle& oracle, double delta, std::uint64_t seed) {
    const std::size_t n = oracle.size();
    require(n > 0, "select_quantile: no hypotheses");
    require(delta > 0 && delta < 0.5, "select_quantile: delta must lie in (0, 1/2)");
    const auto before = oracle.queries();
    QuantileResult res;
    res.samples_used = oracle.samples_used();
    if (n == 1) {
        res.chosen = 0;
        return res;
    }
    const double nd = static_cast<double>(n);
    const double rounds_cap = std::ceil(4.0 * std::log(nd) / delta) + 1.0;
    const auto m = static_cast<std::size_t>(std::ceil(8.0 * std::log(nd * rounds_cap / 0.01) / delta));
    const auto allowed = static_cast<std::size_t>(std::ceil(2.0 * delta * static_cast<double>(m)));
    res.probe_size = m;

    Rng rng(seed);
    std::vector<std::size_t> active(n);
    for (std::size_t j = 0; j < n; ++j) active[j] = j;
    std::vector<double> vals(m);
    while (!active.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
        std::size_t pivot = 0;
        double t = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& v : vals) v = oracle.query(i, active[pick(rng)]);
            double a = quantile_threshold(vals, allowed);
            if (a > t) {
                t = a;
                pivot = i;
            }
        }
        QuantileRound round{pivot, t, active};
        std::vector<std::size_t> next;
        for (auto j : active)
            if (oracle.query(pivot, j) < t) next.push_back(j);
        if (next.size() == active.size())
            fail(ErrorKind::NotConverged, "select_quantile: round removed nothing");
        active = std::move(next);
        res.rounds.push_back(std::move(round));
    }
    std::size_t best = 0;
    for (std::size_t l = 1; l < res.rounds.size(); ++l)
        if (res.rounds[l].threshold < res.rounds[best].threshold) best = l;
    res.best_round = best;
    const auto& pool = res.rounds[best].active_before;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    res.chosen = pool[pick(rng)];
    res.queries = oracle.queries() - before;
    return res;
}

}  // namespace hsel

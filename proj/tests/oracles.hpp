#pragma once

// Test-side reference computations, written independently of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hsel/distribution.hpp"
#include "hsel/hypotheses.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

// tv as the largest one-sided gap, sum of positive parts.
inline double tv(const Vec& p, const Vec& q) {
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) s += std::max(0.0, p[x] - q[x]);
    return s;
}

inline bool in_set(const Vec& hi, const Vec& hj, std::size_t i, std::size_t j, std::size_t x) {
    return i < j ? hi[x] < hj[x] : hi[x] <= hj[x];
}

inline double mass_on_set(const Vec& m, const Vec& hi, const Vec& hj, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t x = 0; x < m.size(); ++x)
        if (in_set(hi, hj, i, j, x)) s += m[x];
    return s;
}

// Exact semi-distance matrix.
inline Mat semi_distances(const std::vector<Vec>& h, const Vec& p) {
    const std::size_t n = h.size();
    Mat w(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) w[i][j] = std::abs(mass_on_set(h[j], h[i], h[j], i, j) - mass_on_set(p, h[i], h[j], i, j));
    return w;
}

inline std::vector<Vec> raw(const std::vector<hsel::DiscreteDistribution>& hs) {
    std::vector<Vec> out;
    for (const auto& h : hs) out.push_back(h.probs());
    return out;
}

inline Vec random_simplex(std::size_t d, std::mt19937_64& rng, double alpha = 1.0) {
    std::gamma_distribution<double> g(alpha, 1.0);
    Vec v(d);
    double s = 0.0;
    for (auto& x : v) s += (x = g(rng));
    for (auto& x : v) x /= s;
    return v;
}

inline std::vector<hsel::DiscreteDistribution> random_hypotheses(std::size_t n, std::size_t d,
                                                                 std::mt19937_64& rng) {
    std::vector<hsel::DiscreteDistribution> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(hsel::DiscreteDistribution::normalized(random_simplex(d, rng)));
    return out;
}

// Graph with exactly `edges` off-diagonal edges (value 1) placed at random,
// other entries 0; thresholded at b = 0.5.
inline Mat planted_graph(std::size_t n, std::size_t edges, std::mt19937_64& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) slots.emplace_back(i, j);
    std::shuffle(slots.begin(), slots.end(), rng);
    Mat w(n, Vec(n, 0.0));
    for (std::size_t e = 0; e < edges; ++e) w[slots[e].first][slots[e].second] = 1.0;
    return w;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hsel/hypotheses.hpp"
#include "hsel/selector.hpp"
#include "hsel/semi_distance.hpp"

namespace hsel {

// argmin_j max_i w_{i->j}, lowest index on ties.
std::size_t select_min_w(const SemiDistanceTable& table);

// Builds the table through the oracle, then picks as above.
SelectorResult select_min_w(SemiDistanceOracle& oracle);

// Unordered pairs (i < j) by decreasing tv(H_i, H_j), ties lexicographic.
std::vector<std::pair<std::size_t, std::size_t>> mlw_pair_order(const HypothesisSet& h);

// Loser of a comparison between i < j: the one whose semi-distance on the
// shared Scheffe set is larger; the higher index on ties.
inline std::size_t comparison_loser(std::size_t i, std::size_t j, double w_ij, double w_ji) {
    if (i > j) {
        std::swap(i, j);
        std::swap(w_ij, w_ji);
    }
    return w_ji > w_ij ? i : j;
}

inline std::size_t comparison_loser(const SemiDistanceTable& t, std::size_t i, std::size_t j) {
    return comparison_loser(i, j, t(i, j), t(j, i));
}

// Same, reading the two semi-distances through the oracle.
inline std::size_t comparison_loser(SemiDistanceOracle& o, std::size_t i, std::size_t j) {
    return comparison_loser(i, j, o.query(i, j), o.query(j, i));
}

// Walks the order, eliminating the loser of each pair whose endpoints are
// both alive. Rejects an order that is not a permutation of all pairs sorted
// as mlw_pair_order sorts them.
std::size_t select_mlw(const HypothesisSet& h, const SemiDistanceTable& table,
                       const std::vector<std::pair<std::size_t, std::size_t>>& order);

// Reads only the 2(n - 1) semi-distances the comparisons need.
SelectorResult select_mlw(SemiDistanceOracle& oracle,
                          const std::vector<std::pair<std::size_t, std::size_t>>& order);

struct QuantileRound {
    std::size_t pivot;              // i_l
    double threshold;               // t_l
    std::vector<std::size_t> active_before;
};

struct QuantileResult : SelectorResult {
    std::vector<QuantileRound> rounds;
    std::size_t best_round = 0;
    std::size_t probe_size = 0;
};

// Repeated quantile pruning: each round every hypothesis i estimates, from
// |R| random active j, the smallest value a_i such that at most
// ceil(2 delta |R|) sampled w_{i->j} reach it. The largest a_i prunes every
// active j at or above it. The answer is a uniform member of the active set
// from the round with the smallest threshold.
QuantileResult select_quantile(SemiDistanceOracle& oracle, double delta, std::uint64_t seed);

// Quantile rule used per hypothesis; exposed for testing.
double quantile_threshold(std::vector<double> values, std::size_t allowed);

}  // namespace hsel

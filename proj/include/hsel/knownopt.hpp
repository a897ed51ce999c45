#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsel/selector.hpp"
#include "hsel/semi_distance.hpp"

namespace hsel {

// Fraction of probes i with w_{i->j} > threshold.
double lambda_fraction(SemiDistanceOracle& oracle, std::size_t j,
                       const std::vector<std::size_t>& probe, double threshold);

struct KnownOptResult : SelectorResult {
    enum Branch { EmptySet, Halt, Trivial };
    Branch branch = Trivial;
    std::vector<std::size_t> pivots;  // j_0, j_1, ...
    std::size_t rounds = 0;
};

// Selection when an upper bound `opt` on min_i W(H_i) is known. Each round
// takes the first candidate j whose probed fraction of violating hypotheses
// is at most 2^-(k+1); its violators form the next candidate set. Throws
// ErrorKind::OptInfeasible if the first round finds no candidate.
KnownOptResult select_known_opt(SemiDistanceOracle& oracle, double opt, double eps, double delta,
                                std::uint64_t seed);

}  // namespace hsel

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hsel/rng.hpp"
#include "hsel/selector.hpp"
#include "hsel/semi_distance.hpp"

namespace hsel {

// Directed graph on [n] with an edge u -> j when w_{u->j} > b. Out-degrees
// are measured into the active subset only. Every edge test is charged as a
// semi-distance query.
class ThresholdGraphView {
public:
    ThresholdGraphView(SemiDistanceOracle& oracle, double b);

    std::size_t universe() const { return oracle_->size(); }
    double b() const { return b_; }
    const std::vector<std::size_t>& active() const { return active_; }
    bool is_active(std::size_t j) const { return pos_[j] != kNone; }
    void remove(std::size_t j);

    bool edge(std::size_t u, std::size_t j) { return oracle_->query(u, j) > b_; }

    // Uncharged exact counts, for samplers that charge their literal cost.
    std::size_t out_degree(std::size_t u);
    std::size_t edge_count();

    SemiDistanceOracle& oracle() { return *oracle_; }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    SemiDistanceOracle* oracle_;
    double b_;
    std::vector<std::size_t> active_;
    std::vector<std::size_t> pos_;
};

// ceil(48 ln(1/beta) / gamma), at least 1.
std::uint64_t degree_sample_count(double beta, double gamma);

// Fraction of edges among T uniform pairs of U x active. When T exceeds the
// number of pairs the edge count is drawn from the binomial law that T
// literal draws would follow; the charge is T queries either way.
double estimate_average_degree(ThresholdGraphView& g, double beta, double gamma, Rng& rng);

// Same, for pairs (u, v) with v uniform over the active set.
double estimate_out_degree(ThresholdGraphView& g, std::size_t u, double beta, double gamma, Rng& rng);

// Returns a vertex with estimated out-degree above 2^-r / 100 for some
// round r, or nothing when every round is exhausted.
std::optional<std::size_t> find_heavy_prompter(ThresholdGraphView& g, double gamma, double beta,
                                               Rng& rng);

struct PromptResult {
    enum Kind { Prompter, Witness, Fail };
    Kind kind;
    std::size_t vertex = 0;
};

// Low-degree case: looks for a neighbor of a random active vertex with
// noticeable out-degree, otherwise for an active vertex whose neighbors all
// have small out-degree.
PromptResult find_prompting(ThresholdGraphView& g, double beta, double d_hat, Rng& rng);

struct ThresholdOutcome {
    bool found = false;            // false means every hypothesis was pruned
    std::size_t hypothesis = 0;
    // (u, j): j was removed because w_{u->j} > b.
    std::vector<std::pair<std::size_t, std::size_t>> certificates;
    std::size_t iterations = 0;
};

// Decides, with failure probability about delta, between "some hypothesis
// j has w_{i->j} <= 2b for many i" and "no hypothesis has W <= b".
ThresholdOutcome solve_threshold(SemiDistanceOracle& oracle, double b, double delta, Rng& rng);
ThresholdOutcome solve_threshold(SemiDistanceOracle& oracle, double b, double delta,
                                 std::uint64_t seed);

struct ThresholdCall {
    double b;
    bool found;
    std::size_t hypothesis;
};

struct FastResult : SelectorResult {
    std::vector<ThresholdCall> calls;
};

// Binary search over b in [0, 1] to width eps/3 using solve_threshold.
FastResult select_fast(SemiDistanceOracle& oracle, double eps, double delta, std::uint64_t seed);

// ceil(log2(3 / eps)) + 2.
std::size_t fast_call_budget(double eps);

}  // namespace hsel

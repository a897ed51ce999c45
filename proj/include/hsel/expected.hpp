#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hsel/semi_distance.hpp"
#include "hsel/selector.hpp"

namespace hsel {

// p_i = (D / W_i - (n - 2)) / (D C - n (n - 2)) with C = sum 1/W_i and
// D = sum W_i. Requires every W_i > 0. Entries can be negative.
std::vector<double> closed_form_weights(const std::vector<double>& w);

// Largest k such that the k smallest values satisfy
// (k - 3) W_j <= sum_{i != j} W_i for every j among them.
std::size_t good_index(const std::vector<double>& w_sorted);

// Closed-form weights on the good_index(W) smallest entries, zero elsewhere.
// Ties in W are ordered by index.
std::vector<double> round_weights(const std::vector<double>& w);

// 1 + sum_{i != star} q_i (1 + W_i / W_star).
double factor_bound(const std::vector<double>& q, const std::vector<double>& w, std::size_t star);

struct MixtureOutput {
    std::vector<double> weights;
    std::vector<double> W;
    std::uint64_t queries = 0;
    std::size_t samples_used = 0;
};

nlohmann::json mixture_to_json(const MixtureOutput& m);
MixtureOutput mixture_from_json(const nlohmann::json& j);

// Uses W_i = shift + max_j w_{j->i}. A zero entry (possible only with a
// zero shift) gets the whole mass, lowest index first.
MixtureOutput select_expected(const SemiDistanceTable& table, double shift);

// Builds the table through the oracle; shifts empirical estimates by eps.
MixtureOutput select_expected(SemiDistanceOracle& oracle, double eps);

}  // namespace hsel

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hsel/hypotheses.hpp"
#include "hsel/selector.hpp"
#include "hsel/semi_distance.hpp"

namespace hsel {

// Farthest-pair structure over the hypotheses under the l1 metric
// (twice total variation), supporting deletions.
class DiameterStructure {
public:
    virtual ~DiameterStructure() = default;

    // A surviving pair (i < j) whose distance is at least (1 - alpha) times
    // the largest surviving distance. Needs two or more survivors.
    virtual std::pair<std::size_t, std::size_t> query() = 0;
    virtual void remove(std::size_t idx);
    virtual double alpha() const = 0;

    std::size_t size() const { return n_; }
    std::size_t alive_count() const { return alive_count_; }
    bool alive(std::size_t i) const { return alive_[i] != 0; }
    double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    // Largest surviving distance, by full scan.
    double surviving_diameter() const;
    double preprocess_ms() const { return preprocess_ms_; }

protected:
    explicit DiameterStructure(const HypothesisSet& h);

    std::size_t n_;
    std::vector<double> dist_;
    std::vector<char> alive_;
    std::size_t alive_count_;
    double preprocess_ms_ = 0.0;
};

// Exact farthest pair; ties go to the lexicographically smallest pair.
class ExactDiameter : public DiameterStructure {
public:
    explicit ExactDiameter(const HypothesisSet& h);
    std::pair<std::size_t, std::size_t> query() override;
    double alpha() const override { return 0.0; }
};

// Keeps candidate pairs found from random anchors together with an upper
// bound on the diameter taken from the last full rescan. Deletions only
// shrink the diameter, so a surviving candidate within (1 - alpha) of that
// bound is a valid answer. A rescan happens when no candidate qualifies.
class HeuristicApprox : public DiameterStructure {
public:
    HeuristicApprox(const HypothesisSet& h, double alpha, std::uint64_t seed);
    std::pair<std::size_t, std::size_t> query() override;
    double alpha() const override { return alpha_; }
    std::size_t rescans() const { return rescans_; }

private:
    void rescan();

    double alpha_;
    std::uint64_t seed_;
    std::size_t rescans_ = 0;
    double bound_ = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> candidates_;
    std::size_t cursor_ = 0;
};

struct BackendSpec {
    enum Kind { Exact, Approx } kind = Exact;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

// "exact" or "approx:A" with 0 < A < 1.
BackendSpec parse_backend(const std::string& text);

std::unique_ptr<DiameterStructure> preprocess(const HypothesisSet& h, const BackendSpec& spec);

struct TournamentResult : SelectorResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // in the order compared
};

// Repeatedly compares the farthest surviving pair and deletes the loser.
TournamentResult select_tournament(const SemiDistanceTable& table, DiameterStructure& diam);

TournamentResult select_tournament(SemiDistanceOracle& oracle, DiameterStructure& diam);

}  // namespace hsel

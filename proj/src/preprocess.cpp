#include "hsel/preprocess.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "hsel/baseline.hpp"
#include "hsel/error.hpp"
#include "hsel/rng.hpp"

namespace hsel {

DiameterStructure::DiameterStructure(const HypothesisSet& h)
    : n_(h.size()), alive_(h.size(), 1), alive_count_(h.size()) {
    require(n_ >= 2, "diameter structure needs at least two hypotheses");
    auto t0 = std::chrono::steady_clock::now();
    dist_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            dist_[i * n_ + j] = dist_[j * n_ + i] = 2.0 * total_variation(h[i], h[j]);
    preprocess_ms_ =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void DiameterStructure::remove(std::size_t idx) {
    require(idx < n_, "diameter: index out of range");
    require(alive_[idx] != 0, "diameter: index already removed");
    alive_[idx] = 0;
    --alive_count_;
}

double DiameterStructure::surviving_diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        if (alive_[i])
            for (std::size_t j = i + 1; j < n_; ++j)
                if (alive_[j]) best = std::max(best, distance(i, j));
    return best;
}

ExactDiameter::ExactDiameter(const HypothesisSet& h) : DiameterStructure(h) {}

std::pair<std::size_t, std::size_t> ExactDiameter::query() {
    require(alive_count_ >= 2, "diameter: fewer than two survivors");
    std::pair<std::size_t, std::size_t> best{0, 0};
    double bd = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (!alive_[i]) continue;
        for (std::size_t j = i + 1; j < n_; ++j)
            if (alive_[j] && distance(i, j) > bd) {
                bd = distance(i, j);
                best = {i, j};
            }
    }
    return best;
}

HeuristicApprox::HeuristicApprox(const HypothesisSet& h, double alpha, std::uint64_t seed)
    : DiameterStructure(h), alpha_(alpha), seed_(seed) {
    require(alpha > 0.0 && alpha < 1.0, "approximate diameter: alpha must lie in (0, 1)");
    auto t0 = std::chrono::steady_clock::now();
    rescan();
    preprocess_ms_ +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void HeuristicApprox::rescan() {
    ++rescans_;
    bound_ = surviving_diameter();
    candidates_.clear();
    cursor_ = 0;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < n_; ++i)
        if (alive_[i]) live.push_back(i);
    if (live.size() < 2) return;

    // About n log n / alpha candidate pairs: every pair within the
    // tolerance that touches one of the sampled anchors.
    Rng rng(derive_seed(seed_, rescans_));
    std::shuffle(live.begin(), live.end(), rng);
    const double nl = static_cast<double>(live.size());
    const auto anchors = std::min(
        live.size(), static_cast<std::size_t>(std::ceil(std::log2(nl + 1.0) / alpha_)));
    const double floor = (1.0 - alpha_) * bound_;
    for (std::size_t a = 0; a < anchors; ++a)
        for (auto b : live)
            if (b != live[a] && distance(live[a], b) >= floor)
                candidates_.emplace_back(std::min(live[a], b), std::max(live[a], b));
    std::shuffle(candidates_.begin(), candidates_.end(), rng);
}

std::pair<std::size_t, std::size_t> HeuristicApprox::query() {
    require(alive_count_ >= 2, "diameter: fewer than two survivors");
    for (int attempt = 0; attempt < 2; ++attempt) {
        while (cursor_ < candidates_.size()) {
            auto [i, j] = candidates_[cursor_];
            if (alive_[i] && alive_[j]) return {i, j};
            ++cursor_;
        }
        rescan();
    }
    fail(ErrorKind::NotConverged, "approximate diameter: rescan produced no candidate");
}

BackendSpec parse_backend(const std::string& text) {
    BackendSpec s;
    if (text == "exact") return s;
    const std::string prefix = "approx:";
    if (text.rfind(prefix, 0) == 0) {
        std::size_t used = 0;
        double a = 0.0;
        try {
            a = std::stod(text.substr(prefix.size()), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used > 0 && used == text.size() - prefix.size() && a > 0.0 && a < 1.0) {
            s.kind = BackendSpec::Approx;
            s.alpha = a;
            return s;
        }
    }
    fail(ErrorKind::Config, "diameter backend must be exact or approx:A with 0 < A < 1, got '" + text + "'");
}

std::unique_ptr<DiameterStructure> preprocess(const HypothesisSet& h, const BackendSpec& spec) {
    if (spec.kind == BackendSpec::Exact) return std::make_unique<ExactDiameter>(h);
    return std::make_unique<HeuristicApprox>(h, spec.alpha, spec.seed);
}

namespace {

template <class Loser>
TournamentResult run_tournament(DiameterStructure& diam, Loser&& loser) {
    require(diam.alive_count() == diam.size(), "select_tournament: structure already used");
    TournamentResult res;
    while (diam.alive_count() > 1) {
        auto [i, j] = diam.query();
        res.pairs.emplace_back(i, j);
        diam.remove(loser(i, j));
    }
    for (std::size_t i = 0; i < diam.size(); ++i)
        if (diam.alive(i)) res.chosen = i;
    return res;
}

}  // namespace

TournamentResult select_tournament(const SemiDistanceTable& table, DiameterStructure& diam) {
    require(table.size() == diam.size(), "select_tournament: table and structure sizes differ");
    return run_tournament(diam, [&](std::size_t i, std::size_t j) { return comparison_loser(table, i, j); });
}

TournamentResult select_tournament(SemiDistanceOracle& oracle, DiameterStructure& diam) {
    require(oracle.size() == diam.size(), "select_tournament: oracle and structure sizes differ");
    const auto before = oracle.queries();
    TournamentResult res = run_tournament(
        diam, [&](std::size_t i, std::size_t j) { return comparison_loser(oracle, i, j); });
    res.queries = oracle.queries() - before;
    res.samples_used = oracle.samples_used();
    return res;
}

}  // namespace hsel

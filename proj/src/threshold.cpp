#include "hsel/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hsel/error.hpp"

namespace hsel {

namespace {

std::uint64_t ceil_u64(double x) {
    if (!(x < 1.8e19)) fail(ErrorKind::InvalidArgument, "sample count overflows");
    return static_cast<std::uint64_t>(std::ceil(x));
}

std::size_t uniform_index(std::size_t size, Rng& rng) {
    return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

// Number of successes among t Bernoulli(p) trials.
std::uint64_t binomial(std::uint64_t t, double p, Rng& rng) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return t;
    auto x = std::binomial_distribution<std::int64_t>(static_cast<std::int64_t>(t), p)(rng);
    return static_cast<std::uint64_t>(x);
}

}  // namespace

ThresholdGraphView::ThresholdGraphView(SemiDistanceOracle& oracle, double b)
    : oracle_(&oracle), b_(b) {
    require(b >= 0.0 && b <= 1.0, "threshold b must lie in [0, 1]");
    const std::size_t n = oracle.size();
    active_.resize(n);
    pos_.resize(n);
    for (std::size_t j = 0; j < n; ++j) active_[j] = pos_[j] = j;
}

void ThresholdGraphView::remove(std::size_t j) {
    std::size_t p = pos_[j];
    if (p == kNone) return;
    std::size_t last = active_.back();
    active_[p] = last;
    pos_[last] = p;
    active_.pop_back();
    pos_[j] = kNone;
}

std::size_t ThresholdGraphView::out_degree(std::size_t u) {
    std::size_t d = 0;
    for (auto v : active_)
        if (oracle_->peek(u, v) > b_) ++d;
    return d;
}

std::size_t ThresholdGraphView::edge_count() {
    std::size_t e = 0;
    for (std::size_t u = 0; u < universe(); ++u) e += out_degree(u);
    return e;
}

std::uint64_t degree_sample_count(double beta, double gamma) {
    require(beta > 0.0 && beta <= 1.0, "failure probability must lie in (0, 1]");
    require(gamma > 0.0, "degree threshold must be positive");
    return std::max<std::uint64_t>(1, ceil_u64(48.0 * std::log(1.0 / beta) / gamma));
}

double estimate_average_degree(ThresholdGraphView& g, double beta, double gamma, Rng& rng) {
    require(!g.active().empty(), "estimate_average_degree: active set is empty");
    const std::uint64_t t = degree_sample_count(beta, gamma);
    const std::size_t n = g.universe();
    const auto& act = g.active();
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * act.size();
    std::uint64_t hits = 0;
    if (t <= pairs) {
        for (std::uint64_t k = 0; k < t; ++k) {
            std::size_t u = uniform_index(n, rng);
            std::size_t v = act[uniform_index(act.size(), rng)];
            if (g.edge(u, v)) ++hits;
        }
    } else {
        hits = binomial(t, static_cast<double>(g.edge_count()) / static_cast<double>(pairs), rng);
        g.oracle().charge(t);
    }
    return static_cast<double>(hits) / static_cast<double>(t);
}

namespace {

double out_degree_estimate(ThresholdGraphView& g, std::size_t u, std::uint64_t t,
                           std::size_t exact_degree, Rng& rng) {
    const auto& act = g.active();
    std::uint64_t hits = 0;
    if (t <= act.size()) {
        for (std::uint64_t k = 0; k < t; ++k)
            if (g.edge(u, act[uniform_index(act.size(), rng)])) ++hits;
    } else {
        hits = binomial(t, static_cast<double>(exact_degree) / static_cast<double>(act.size()), rng);
        g.oracle().charge(t);
    }
    return static_cast<double>(hits) / static_cast<double>(t);
}

}  // namespace

double estimate_out_degree(ThresholdGraphView& g, std::size_t u, double beta, double gamma, Rng& rng) {
    require(!g.active().empty(), "estimate_out_degree: active set is empty");
    require(u < g.universe(), "estimate_out_degree: vertex out of range");
    const std::uint64_t t = degree_sample_count(beta, gamma);
    std::size_t deg = t <= g.active().size() ? 0 : g.out_degree(u);
    return out_degree_estimate(g, u, t, deg, rng);
}

std::optional<std::size_t> find_heavy_prompter(ThresholdGraphView& g, double gamma, double beta,
                                               Rng& rng) {
    require(gamma > 0.0 && gamma < 1.0, "find_heavy_prompter: gamma must lie in (0, 1)");
    require(beta > 0.0 && beta <= 1.0, "find_heavy_prompter: beta must lie in (0, 1]");
    require(!g.active().empty(), "find_heavy_prompter: active set is empty");
    const std::size_t n = g.universe();
    const double lg = std::log2(1.0 / gamma);
    const auto k = static_cast<std::uint64_t>(std::ceil(lg)) + 2;

    // The active set is fixed for the whole call, so exact degrees are
    // computed once. A vertex with no out-edges always fails its test, which
    // lets runs of such draws be skipped in one geometric step.
    std::vector<std::size_t> deg(n);
    std::vector<std::size_t> nonzero;
    for (std::size_t u = 0; u < n; ++u) {
        deg[u] = g.out_degree(u);
        if (deg[u] > 0) nonzero.push_back(u);
    }
    const double p_nonzero = static_cast<double>(nonzero.size()) / static_cast<double>(n);

    for (std::uint64_t r = 1; r < k; ++r) {
        const double scale = std::ldexp(1.0, static_cast<int>(r));
        const std::uint64_t tr = ceil_u64(1e4 * lg * std::log(100.0 / beta) / (scale * gamma));
        const double gamma_r = 1.0 / (100.0 * scale);
        const double beta_r = beta / (100.0 * static_cast<double>(k) * static_cast<double>(tr));
        const std::uint64_t test_len = degree_sample_count(beta_r, gamma_r);
        const bool literal = test_len <= g.active().size();

        std::uint64_t drawn = 0;
        while (drawn < tr) {
            std::uint64_t skip = tr - drawn;
            if (!nonzero.empty())
                skip = std::min<std::uint64_t>(
                    skip, std::geometric_distribution<std::uint64_t>(p_nonzero)(rng));
            g.oracle().charge(saturating_mul(skip, test_len));
            drawn += skip;
            if (drawn >= tr) break;
            std::size_t u = nonzero[uniform_index(nonzero.size(), rng)];
            ++drawn;
            double est = literal ? estimate_out_degree(g, u, beta_r, gamma_r, rng)
                                 : out_degree_estimate(g, u, test_len, deg[u], rng);
            if (est > gamma_r) return u;
        }
    }
    return std::nullopt;
}

PromptResult find_prompting(ThresholdGraphView& g, double beta, double d_hat, Rng& rng) {
    require(!g.active().empty(), "find_prompting: active set is empty");
    require(beta > 0.0 && beta < 1.0, "find_prompting: beta must lie in (0, 1)");
    const std::size_t n = g.universe();
    const double nd = static_cast<double>(n);
    const double bp = beta / 4.0;
    const auto t = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(8.0 * std::log(nd))));
    const double fail_p = std::pow(nd, -11.0);
    const double limit = 20.0 * d_hat * nd;

    auto sample_low_degree = [&]() {
        std::vector<std::pair<std::size_t, std::vector<std::size_t>>> kept;
        for (std::size_t rep = 0; rep < t; ++rep) {
            const auto& act = g.active();
            std::size_t v = act[uniform_index(act.size(), rng)];
            std::vector<std::size_t> nei;
            for (std::size_t u = 0; u < n; ++u)
                if (g.edge(u, v)) nei.push_back(u);
            if (static_cast<double>(nei.size()) <= limit) kept.emplace_back(v, std::move(nei));
        }
        return kept;
    };

    const double g1 = bp / (2.0 * static_cast<double>(t));
    for (const auto& [v, nei] : sample_low_degree())
        for (auto u : nei)
            if (estimate_out_degree(g, u, fail_p, g1, rng) >= g1) return {PromptResult::Prompter, u};

    const double g2 = 2.0 * bp / static_cast<double>(t);
    for (const auto& [v, nei] : sample_low_degree()) {
        bool quiet = true;
        for (auto u : nei)
            if (estimate_out_degree(g, u, fail_p, g2, rng) > g2) {
                quiet = false;
                break;
            }
        if (quiet) return {PromptResult::Witness, v};
    }
    return {PromptResult::Fail, 0};
}

ThresholdOutcome solve_threshold(SemiDistanceOracle& oracle, double b, double delta, Rng& rng) {
    require(delta > 0.0 && delta < 1.0, "solve_threshold: delta must lie in (0, 1)");
    const std::size_t n = oracle.size();
    require(n > 0, "solve_threshold: no hypotheses");
    ThresholdGraphView g(oracle, b);
    const double nd = static_cast<double>(n);
    const double zeta = 1.0 / (nd * nd * nd * nd);
    const std::size_t cap = n * n * n + 64;
    ThresholdOutcome out;

    auto prune = [&](std::size_t u) {
        std::vector<std::size_t> gone;
        for (auto j : g.active())
            if (g.edge(u, j)) gone.push_back(j);
        for (auto j : gone) {
            g.remove(j);
            out.certificates.emplace_back(u, j);
        }
    };

    while (!g.active().empty()) {
        if (++out.iterations > cap)
            fail(ErrorKind::NotConverged, "solve_threshold: iteration cap reached");
        double d_hat = estimate_average_degree(g, zeta, delta, rng);
        if (d_hat < delta) {
            PromptResult pr = find_prompting(g, delta, d_hat, rng);
            if (pr.kind == PromptResult::Witness) {
                out.found = true;
                out.hypothesis = pr.vertex;
                return out;
            }
            if (pr.kind == PromptResult::Prompter) prune(pr.vertex);
        } else if (auto u = find_heavy_prompter(g, delta / 2.0, zeta, rng)) {
            prune(*u);
        }
    }
    return out;
}

ThresholdOutcome solve_threshold(SemiDistanceOracle& oracle, double b, double delta,
                                 std::uint64_t seed) {
    Rng rng(seed);
    return solve_threshold(oracle, b, delta, rng);
}

std::size_t fast_call_budget(double eps) {
    return static_cast<std::size_t>(std::ceil(std::log2(3.0 / eps))) + 2;
}

FastResult select_fast(SemiDistanceOracle& oracle, double eps, double delta, std::uint64_t seed) {
    require(eps > 0.0 && eps < 1.0, "select_fast: eps must lie in (0, 1)");
    require(delta > 0.0 && delta < 1.0, "select_fast: delta must lie in (0, 1)");
    const auto before = oracle.queries();
    FastResult res;
    res.samples_used = oracle.samples_used();
    if (oracle.size() == 1) return res;

    const double eps3 = eps / 3.0;
    const double levels = std::ceil(std::log2(1.0 / eps3));
    const double dprime = delta / (2.0 * levels + 2.0);
    Rng rng(seed);
    auto call = [&](double b) {
        ThresholdOutcome o = solve_threshold(oracle, b, dprime, rng);
        res.calls.push_back({b, o.found, o.hypothesis});
        return o;
    };

    ThresholdOutcome at0 = call(0.0);
    if (at0.found) {
        res.chosen = at0.hypothesis;
    } else {
        ThresholdOutcome at1 = call(1.0);
        if (!at1.found) fail(ErrorKind::NotConverged, "select_fast: no hypothesis at b = 1");
        double lo = 0.0, hi = 1.0;
        std::size_t best = at1.hypothesis;
        while (hi - lo > eps3) {
            double mid = 0.5 * (lo + hi);
            ThresholdOutcome o = call(mid);
            if (o.found) {
                hi = mid;
                best = o.hypothesis;
            } else {
                lo = mid;
            }
        }
        res.chosen = best;
    }
    res.queries = oracle.queries() - before;
    return res;
}

}  // namespace hsel

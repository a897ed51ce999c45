#include <doctest.h>

#include <random>
#include <thread>

#include "hsel/error.hpp"
#include "hsel/hypotheses.hpp"
#include "hsel/instance_io.hpp"
#include "hsel/semi_distance.hpp"
#include "oracles.hpp"

using namespace hsel;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Io;
}

HypothesisSet two_point() {
    return HypothesisSet({DiscreteDistribution({0.7, 0.3}), DiscreteDistribution({0.3, 0.7})});
}

}  // namespace

TEST_CASE("distribution validation") {
    CHECK_NOTHROW(DiscreteDistribution({0.5, 0.5 + 5e-10}));
    CHECK(kind_of([] { DiscreteDistribution({0.5, 0.6}); }) == ErrorKind::InvalidDistribution);
    CHECK(kind_of([] { DiscreteDistribution({1.1, -0.1}); }) == ErrorKind::InvalidDistribution);
    CHECK(kind_of([] { DiscreteDistribution(std::vector<double>{}); }) == ErrorKind::InvalidDistribution);
    auto d = DiscreteDistribution::normalized({2.0, 6.0});
    CHECK(d[0] == doctest::Approx(0.25));
}

TEST_CASE("tv distance") {
    DiscreteDistribution half({0.5, 0.5}), a({1.0, 0.0}), b({0.0, 1.0});
    CHECK(total_variation(half, half) == 0.0);
    CHECK(total_variation(a, b) == 1.0);
    CHECK(total_variation(DiscreteDistribution({0.7, 0.3}), DiscreteDistribution({0.3, 0.7})) ==
          doctest::Approx(0.4).epsilon(1e-15));
    CHECK(kind_of([&] { total_variation(half, DiscreteDistribution({1.0})); }) == ErrorKind::DomainMismatch);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto p = oracle::random_simplex(7, rng), q = oracle::random_simplex(7, rng);
        DiscreteDistribution dp(p), dq(q);
        CHECK(total_variation(dp, dq) == doctest::Approx(oracle::tv(p, q)).epsilon(1e-12));
        CHECK(total_variation(dp, dq) == total_variation(dq, dp));
    }
}

TEST_CASE("scheffe sets") {
    auto h = two_point();
    CHECK(h.scheffe_set(0, 1) == std::vector<std::uint32_t>{1});
    CHECK(h.scheffe_mass(1, 0, 1) == doctest::Approx(0.7));
    CHECK(kind_of([&] { h.scheffe_set(1, 1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { h.scheffe_mass(0, 1, 1); }) == ErrorKind::InvalidArgument);

    HypothesisSet same({DiscreteDistribution({0.2, 0.8}), DiscreteDistribution({0.2, 0.8})});
    CHECK(same.scheffe_set(0, 1).empty());
    CHECK(same.scheffe_set(1, 0).size() == 2);

    std::mt19937_64 rng(5);
    auto hs = oracle::random_hypotheses(6, 9, rng);
    // Force exact ties so the tie-break branch is exercised.
    std::vector<double> tied = hs[0].probs();
    tied[3] = hs[1][3];
    tied[4] += hs[0][3] - hs[1][3];
    hs[0] = DiscreteDistribution::normalized(tied);
    HypothesisSet set(hs);
    auto raw = oracle::raw(hs);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            if (i == j) continue;
            auto a = set.scheffe_set(i, j), b = set.scheffe_set(j, i);
            std::vector<int> cover(9, 0);
            for (auto x : a) ++cover[x];
            for (auto x : b) ++cover[x];
            for (int c : cover) CHECK(c == 1);
            // witness identity
            double gap = set.scheffe_mass(j, i, j) - set.scheffe_mass(i, i, j);
            CHECK(gap == doctest::Approx(oracle::tv(raw[i], raw[j])).epsilon(1e-12));
            for (std::size_t k = 0; k < 6; ++k) {
                double m = set.scheffe_mass(k, i, j);
                CHECK(m == doctest::Approx(oracle::mass_on_set(raw[k], raw[i], raw[j], i, j)).epsilon(1e-13));
                CHECK(m + set.scheffe_mass(k, j, i) == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
}

TEST_CASE("scheffe cache counts every call and matches recomputation") {
    auto h = two_point();
    auto q0 = h.queries();
    double first = h.scheffe_mass(0, 0, 1);
    double second = h.scheffe_mass(0, 0, 1);
    CHECK(first == second);
    CHECK(h.queries() == q0 + 2);
}

TEST_CASE("scheffe cache under concurrent readers") {
    std::mt19937_64 rng(3);
    HypothesisSet h(oracle::random_hypotheses(8, 30, rng));
    auto raw = oracle::raw(h.hypotheses());
    std::vector<std::thread> pool;
    std::atomic<int> bad{0};
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&] {
            for (int rep = 0; rep < 50; ++rep)
                for (std::size_t i = 0; i < 8; ++i)
                    for (std::size_t j = 0; j < 8; ++j)
                        if (i != j && h.scheffe_mass(j, i, j) != oracle::mass_on_set(raw[j], raw[i], raw[j], i, j))
                            ++bad;
        });
    for (auto& th : pool) th.join();
    CHECK(bad == 0);
    CHECK(h.queries() == 4u * 50u * 56u);
}

TEST_CASE("semi-distances") {
    auto h = two_point();
    DiscreteDistribution p({0.5, 0.5});
    CHECK(semi_distance_exact(h, p, 0, 1) == doctest::Approx(0.2));
    CHECK(semi_distance_exact(h, h[1], 0, 1) == 0.0);
    CHECK(kind_of([&] { semi_distance_exact(h, DiscreteDistribution({1.0}), 0, 1); }) == ErrorKind::DomainMismatch);

    // H_1(S) = 0.4 on S = {0}; 6 of 10 draws land in S.
    HypothesisSet h2({DiscreteDistribution({0.3, 0.7}), DiscreteDistribution({0.4, 0.6})});
    auto s = make_sample({0, 0, 0, 0, 0, 0, 1, 1, 1, 1}, 2);
    CHECK(estimate_semi_distance(s, h2, 0, 1) == doctest::Approx(0.2));
    CHECK(h2.queries() == 1 + 10);
    HypothesisSet h3({DiscreteDistribution({0.0, 1.0}), DiscreteDistribution({0.0, 1.0})});
    // S_{1->0} = {x : H_1(x) <= H_0(x)} is everything; use i < j, S empty.
    CHECK(estimate_semi_distance(make_sample({1, 1}, 2), h3, 0, 1) == 0.0);
    CHECK(kind_of([&] { estimate_semi_distance(SampleSet{}, h2, 0, 1); }) == ErrorKind::EmptySample);
}

TEST_CASE("semi-distance properties on random instances") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        auto hs = oracle::random_hypotheses(3, 6, rng);
        DiscreteDistribution p(oracle::random_simplex(6, rng));
        HypothesisSet h(hs);
        auto raw = oracle::raw(hs);
        auto w = oracle::semi_distances(raw, p.probs());
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                if (i == j) continue;
                double v = semi_distance_exact(h, p, i, j);
                CHECK(v == doctest::Approx(w[i][j]).epsilon(1e-13));
                CHECK(v <= total_variation(p, hs[j]) + 1e-15);
                // complement identity
                double comp = std::abs(h.scheffe_mass(i, i, j) - oracle::mass_on_set(p.probs(), raw[i], raw[j], i, j));
                CHECK(semi_distance_exact(h, p, j, i) == doctest::Approx(comp).epsilon(1e-13));
                // triangle form
                CHECK(total_variation(p, hs[j]) <=
                      total_variation(p, hs[i]) + w[i][j] + w[j][i] + 1e-12);
            }
    }
}

TEST_CASE("empirical semi-distance accuracy") {
    const double eps = 0.1, delta = 0.05;
    const std::size_t s = pair_sample_size(eps, delta);
    CHECK(s == 14380);
    std::mt19937_64 rng(23);
    HypothesisSet h(oracle::random_hypotheses(2, 12, rng));
    DiscreteDistribution p(oracle::random_simplex(12, rng));
    const double w = semi_distance_exact(h, p, 0, 1);
    int good = 0;
    for (int t = 0; t < 1000; ++t) {
        auto sample = draw_sample(p, s, 1000 + t);
        if (std::abs(estimate_semi_distance(sample, h, 0, 1) - w) <= eps) ++good;
    }
    CHECK(good >= 950);
}

TEST_CASE("oracle and tables") {
    std::mt19937_64 rng(29);
    HypothesisSet one({DiscreteDistribution({0.5, 0.5})});
    auto t1 = build_table(one, one[0]);
    CHECK(t1.size() == 1);
    CHECK(t1(0, 0) == 0.0);

    auto hs = oracle::random_hypotheses(5, 10, rng);
    HypothesisSet h(hs);
    DiscreteDistribution p(oracle::random_simplex(10, rng));
    auto before = h.queries();
    auto exact = build_table(h, p);
    CHECK(h.queries() - before == 20);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(exact(i, j) == semi_distance_exact(h, p, i, j));
            CHECK(exact(i, j) >= 0.0);
            CHECK(exact(i, j) <= 1.0);
        }

    auto sample = draw_sample(p, 500, 7);
    SemiDistanceOracle o(h, sample);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(o.peek(i, j) == estimate_semi_distance(sample, h, i, j));
    before = o.queries();
    o.query(0, 1);
    o.query(0, 1);
    o.query(2, 2);
    CHECK(o.queries() - before == 2 * 501);
    o.charge(3);
    CHECK(o.queries() - before == 5 * 501);
}

TEST_CASE("empirical row maximum of the best hypothesis") {
    const std::size_t n = 6;
    const double eps = 0.1, delta = 0.1;
    std::mt19937_64 rng(31);
    int good = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        HypothesisSet h(oracle::random_hypotheses(n, 20, rng));
        DiscreteDistribution p(oracle::random_simplex(20, rng));
        auto best = best_hypothesis(h, p);
        auto table = build_table(h, draw_sample(p, harness_sample_size(n, eps, delta), 50 + t));
        if (table.column_max(best.index) <= best.distance + eps) ++good;
    }
    CHECK(good >= 90);
}

TEST_CASE("query counter saturates") {
    QueryCounter c;
    c.add(std::numeric_limits<std::uint64_t>::max() - 1);
    c.add(5);
    CHECK(c.value() == std::numeric_limits<std::uint64_t>::max());
    CHECK(saturating_mul(1ULL << 40, 1ULL << 40) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("instance files") {
    nlohmann::json j = {{"domain_size", 2}, {"hypotheses", {{0.5, 0.5}, {0.9, 0.1}}},
                        {"true_distribution", {0.7, 0.3}}};
    auto inst = instance_from_json(j);
    CHECK(inst.hypotheses.size() == 2);
    CHECK(inst.truth.has_value());
    auto back = instance_from_json(instance_to_json(inst));
    CHECK(back.hypotheses[1].probs() == inst.hypotheses[1].probs());

    nlohmann::json neg = {{"domain_size", 2}, {"hypotheses", {{1.2, -0.2}}}};
    CHECK(kind_of([&] { instance_from_json(neg); }) == ErrorKind::InvalidDistribution);
    nlohmann::json sum = {{"domain_size", 2}, {"hypotheses", {{0.5, 0.5 + 1e-8}}}};
    CHECK(kind_of([&] { instance_from_json(sum); }) == ErrorKind::InvalidDistribution);
    nlohmann::json len = {{"domain_size", 3}, {"hypotheses", {{0.5, 0.5}}}};
    CHECK(kind_of([&] { instance_from_json(len); }) == ErrorKind::DomainMismatch);
    CHECK(kind_of([&] { load_instance("/nonexistent/file.json"); }) == ErrorKind::Io);
}

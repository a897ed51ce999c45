#include "hsel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <random>
#include <ostream>
#include <sstream>
#include <thread>

#include "hsel/baseline.hpp"
#include "hsel/error.hpp"
#include "hsel/expected.hpp"
#include "hsel/instance_io.hpp"
#include "hsel/instances.hpp"
#include "hsel/knownopt.hpp"
#include "hsel/preprocess.hpp"
#include "hsel/rng.hpp"
#include "hsel/threshold.hpp"

namespace hsel {

namespace {

constexpr const char* kCsvVersion = "# hsel-trials v1";
const std::vector<std::string> kColumns = {
    "trial", "algo", "n", "d", "eps", "delta", "seed", "chosen", "opt_index", "opt",
    "achieved_tv", "factor", "satisfied_3opt_eps", "oracle_queries", "samples_used", "wall_ms",
    "expected_tv", "expected_factor"};

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Config, what); }

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) config_error("bad number '" + s + "' in report");
    return v;
}

template <class T>
T parse_int(const std::string& s) {
    T v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) config_error("bad integer '" + s + "' in report");
    return v;
}

struct TrialInstance {
    std::vector<DiscreteDistribution> hypotheses;
    DiscreteDistribution truth;
};

TrialInstance make_instance(const ExperimentConfig& c, std::uint64_t seed) {
    TrialInstance ti;
    if (c.family == "planted") {
        PlantedInstance p = gen_planted(c.n, c.d, c.target_opt, seed);
        ti.hypotheses = std::move(p.hypotheses);
        ti.truth = std::move(p.truth);
    } else if (c.family == "hard-expected") {
        HardExpectedInstance h = gen_hard_expected(c.n, c.k, c.ell);
        Rng rng(seed);
        std::size_t i = std::uniform_int_distribution<std::size_t>(0, c.n - 1)(rng);
        ti.truth = h.sample_truth(i, rng);
        ti.hypotheses = std::move(h.hypotheses);
    } else if (c.family == "paired") {
        Rng rng(seed);
        for (std::size_t i = 0; i < c.n; ++i)
            ti.hypotheses.push_back(gen_paired_member(c.k_dom, c.family_eps, random_mask(c.k_dom / 2, rng)));
        ti.truth = gen_paired_member(c.k_dom, c.family_eps, random_mask(c.k_dom / 2, rng));
    } else {
        InstanceData data = load_instance(c.instance);
        if (!data.truth) config_error("instance file has no true_distribution");
        ti.hypotheses = std::move(data.hypotheses);
        ti.truth = std::move(*data.truth);
    }
    return ti;
}

double optional_number(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) config_error(std::string(key) + " must be a number");
    return j[key].get<double>();
}

std::size_t optional_count(const nlohmann::json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 0) config_error(std::string(key) + " must be a nonnegative integer");
    return j[key].get<std::size_t>();
}

std::string optional_string(const nlohmann::json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (j[key].is_number()) return j[key].dump();
    if (!j[key].is_string()) config_error(std::string(key) + " must be a string");
    return j[key].get<std::string>();
}

std::size_t sample_mixture(const std::vector<double>& weights, std::uint64_t seed) {
    Rng rng(seed);
    std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
    return d(rng);
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> names = {"minw",     "mlw",        "quantile", "fast",
                                                   "knownopt", "tournament", "expected"};
    return names;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) config_error("config must be a JSON object");
    static const std::vector<std::string> keys = {
        "family", "n", "d", "target_opt", "k", "ell", "k_dom", "family_eps", "instance",
        "algorithms", "eps", "delta", "trials", "master_seed", "seed", "opt", "diam",
        "sample_size", "threads", "timing"};
    for (const auto& [key, value] : j.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) config_error("unknown config key '" + key + "'");
    ExperimentConfig c;
    c.family = optional_string(j, "family", c.family);
    c.n = optional_count(j, "n", c.n);
    c.d = optional_count(j, "d", c.d);
    c.target_opt = optional_number(j, "target_opt", c.target_opt);
    c.k = optional_count(j, "k", c.k);
    c.ell = optional_count(j, "ell", c.ell);
    c.k_dom = optional_count(j, "k_dom", c.k_dom);
    c.family_eps = optional_number(j, "family_eps", c.family_eps);
    c.instance = optional_string(j, "instance", c.instance);
    if (j.contains("algorithms")) {
        if (!j["algorithms"].is_array()) config_error("algorithms must be an array of names");
        c.algorithms.clear();
        for (const auto& a : j["algorithms"]) {
            if (!a.is_string()) config_error("algorithms must be an array of names");
            c.algorithms.push_back(a.get<std::string>());
        }
    }
    c.eps = optional_number(j, "eps", c.eps);
    c.delta = optional_number(j, "delta", c.delta);
    c.trials = optional_count(j, "trials", c.trials);
    if (j.contains("seed")) c.master_seed = optional_count(j, "seed", 0);
    if (j.contains("master_seed")) c.master_seed = optional_count(j, "master_seed", 0);
    c.opt = optional_string(j, "opt", c.opt);
    c.diam = optional_string(j, "diam", c.diam);
    c.sample_size = optional_count(j, "sample_size", c.sample_size);
    c.threads = optional_count(j, "threads", c.threads);
    if (j.contains("timing")) {
        if (!j["timing"].is_boolean()) config_error("timing must be true or false");
        c.timing = j["timing"].get<bool>();
    }
    validate(c);
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    return {{"family", c.family},   {"n", c.n},
            {"d", c.d},             {"target_opt", c.target_opt},
            {"k", c.k},             {"ell", c.ell},
            {"k_dom", c.k_dom},     {"family_eps", c.family_eps},
            {"instance", c.instance}, {"algorithms", c.algorithms},
            {"eps", c.eps},         {"delta", c.delta},
            {"trials", c.trials},   {"master_seed", c.master_seed},
            {"opt", c.opt},         {"diam", c.diam},
            {"sample_size", c.sample_size}, {"threads", c.threads},
            {"timing", c.timing}};
}

void validate(const ExperimentConfig& c) {
    if (!(c.eps > 0.0 && c.eps < 1.0)) config_error("eps must lie in (0, 1)");
    if (!(c.delta > 0.0 && c.delta < 1.0)) config_error("delta must lie in (0, 1)");
    if (c.algorithms.empty()) config_error("no algorithms selected");
    for (const auto& a : c.algorithms)
        if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end())
            config_error("unknown algorithm '" + a + "'");
    if (c.opt != "auto") {
        std::size_t used = 0;
        double v = -1.0;
        try {
            v = std::stod(c.opt, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != c.opt.size() || !(v >= 0.0)) config_error("opt must be 'auto' or a nonnegative number");
    }
    parse_backend(c.diam);
    if (c.family == "planted") {
        if (c.n == 0 || c.d < 2) config_error("planted family needs n >= 1 and d >= 2");
        if (!(c.target_opt >= 0.0 && c.target_opt < 1.0)) config_error("target_opt must lie in [0, 1)");
    } else if (c.family == "hard-expected") {
        if (c.n < 2 || c.k == 0 || c.ell < 2) config_error("hard-expected family needs n >= 2, k >= 1 and ell >= 2");
    } else if (c.family == "paired") {
        if (c.n == 0 || c.k_dom < 2 || c.k_dom % 2) config_error("paired family needs n >= 1 and even k_dom");
        if (!(c.family_eps >= 0.0 && c.family_eps <= 1.0)) config_error("family_eps must lie in [0, 1]");
    } else if (c.family == "file") {
        if (c.instance.empty()) config_error("file family needs an instance path");
    } else {
        config_error("unknown family '" + c.family + "'");
    }
}

std::vector<TrialReport> run_trial(const ExperimentConfig& c, std::size_t trial) {
    const std::uint64_t seed = trial_seed(c.master_seed, trial);
    TrialInstance ti = make_instance(c, derive_seed(seed, "instance"));
    HypothesisSet h(std::move(ti.hypotheses));
    const DiscreteDistribution& p = ti.truth;
    if (p.domain_size() != h.domain_size()) config_error("true distribution domain differs from hypotheses");
    const BestHypothesis best = best_hypothesis(h, p);
    const std::size_t n = h.size();
    const std::size_t s = c.sample_size ? c.sample_size : harness_sample_size(n, c.eps, c.delta);
    const SampleSet sample = draw_sample(p, s, derive_seed(seed, "sample"), &h.counter());
    SemiDistanceOracle oracle(h, sample);
    const double opt_bound = c.opt == "auto" ? best.distance : std::stod(c.opt);

    std::vector<TrialReport> rows;
    for (const auto& algo : c.algorithms) {
        const std::uint64_t aseed = derive_seed(seed, algo);
        TrialReport r;
        r.trial = trial;
        r.algo = algo;
        r.n = n;
        r.d = h.domain_size();
        r.eps = c.eps;
        r.delta = c.delta;
        r.seed = seed;
        r.opt_index = best.index;
        r.opt = best.distance;
        r.samples_used = s;

        // Pair orders and diameter structures depend only on the hypotheses
        // and are built outside the timed call.
        std::vector<std::pair<std::size_t, std::size_t>> order;
        std::unique_ptr<DiameterStructure> diam;
        if (algo == "mlw") order = mlw_pair_order(h);
        if (algo == "tournament" && n >= 2) {
            BackendSpec spec = parse_backend(c.diam);
            spec.seed = derive_seed(aseed, "diameter");
            diam = preprocess(h, spec);
        }

        const auto t0 = std::chrono::steady_clock::now();
        std::optional<MixtureOutput> mix;
        SelectorResult sel;
        bool declined = false;
        if (algo == "minw") {
            sel = select_min_w(oracle);
        } else if (algo == "mlw") {
            sel = select_mlw(oracle, order);
        } else if (algo == "quantile") {
            sel = select_quantile(oracle, c.delta, aseed);
        } else if (algo == "fast") {
            sel = select_fast(oracle, c.eps, c.delta, aseed);
        } else if (algo == "knownopt") {
            const auto before = oracle.queries();
            try {
                sel = select_known_opt(oracle, opt_bound, c.eps, c.delta, aseed);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::OptInfeasible) throw;
                declined = true;
                sel.queries = oracle.queries() - before;
            }
        } else if (algo == "tournament") {
            if (diam) sel = select_tournament(oracle, *diam);
        } else {
            mix = select_expected(oracle, c.eps);
            sel.queries = mix->queries;
            sel.chosen = sample_mixture(mix->weights, derive_seed(aseed, "draw"));
        }
        const auto t1 = std::chrono::steady_clock::now();
        if (c.timing) r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        r.oracle_queries = sel.queries;

        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (declined) {
            r.chosen = -1;
            r.achieved_tv = nan;
            r.factor = nan;
            r.satisfied = false;
        } else {
            r.chosen = static_cast<long long>(sel.chosen);
            r.achieved_tv = total_variation(h[sel.chosen], p);
            r.factor = r.opt > 0.0 ? r.achieved_tv / r.opt : -1.0;
            r.satisfied = r.achieved_tv <= 3.0 * r.opt + c.eps;
        }
        if (mix) {
            double etv = 0.0;
            for (std::size_t i = 0; i < n; ++i) etv += mix->weights[i] * total_variation(h[i], p);
            r.expected_tv = etv;
            r.expected_factor = r.opt > 0.0 ? etv / r.opt : -1.0;
            r.satisfied = etv <= (3.0 - 2.0 / static_cast<double>(n)) * r.opt + c.eps;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<TrialReport> run_trials(const ExperimentConfig& c) {
    validate(c);
    std::size_t workers = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, c.trials);
    std::vector<std::vector<TrialReport>> per_trial(c.trials);
    std::vector<std::exception_ptr> errors(c.trials);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t t; (t = next.fetch_add(1)) < c.trials;) {
            try {
                per_trial[t] = run_trial(c, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<TrialReport> rows;
    for (auto& v : per_trial)
        for (auto& r : v) rows.push_back(std::move(r));
    return rows;
}

void write_csv(std::ostream& out, const std::vector<TrialReport>& rows) {
    out << kCsvVersion << '\n';
    for (std::size_t k = 0; k < kColumns.size(); ++k) out << (k ? "," : "") << kColumns[k];
    out << '\n';
    for (const auto& r : rows) {
        out << r.trial << ',' << r.algo << ',' << r.n << ',' << r.d << ',' << fmt(r.eps) << ','
            << fmt(r.delta) << ',' << r.seed << ',' << r.chosen << ',' << r.opt_index << ','
            << fmt(r.opt) << ',' << fmt(r.achieved_tv) << ',' << fmt(r.factor) << ','
            << (r.satisfied ? 1 : 0) << ',' << r.oracle_queries << ',' << r.samples_used << ','
            << fmt(r.wall_ms) << ',' << (r.expected_tv ? fmt(*r.expected_tv) : "") << ','
            << (r.expected_factor ? fmt(*r.expected_factor) : "") << '\n';
    }
}

std::vector<TrialReport> read_csv(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    std::vector<TrialReport> rows;
    auto split = [](const std::string& s) {
        std::vector<std::string> f;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!s.empty() && s.back() == ',') f.emplace_back();
        return f;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = split(line);
            for (const char* need : {"trial", "algo", "opt", "factor", "satisfied_3opt_eps",
                                     "oracle_queries", "wall_ms"})
                if (std::find(header.begin(), header.end(), need) == header.end())
                    config_error(std::string("report is missing column ") + need);
            continue;
        }
        auto f = split(line);
        if (f.size() != header.size()) config_error("report row has the wrong number of fields");
        std::map<std::string, std::string> m;
        for (std::size_t k = 0; k < f.size(); ++k) m[header[k]] = f[k];
        auto get = [&](const char* key) { return m.count(key) ? m[key] : std::string(); };
        TrialReport r;
        r.trial = parse_int<std::size_t>(get("trial"));
        r.algo = get("algo");
        if (!get("n").empty()) r.n = parse_int<std::size_t>(get("n"));
        if (!get("d").empty()) r.d = parse_int<std::size_t>(get("d"));
        if (!get("eps").empty()) r.eps = parse_double(get("eps"));
        if (!get("delta").empty()) r.delta = parse_double(get("delta"));
        if (!get("seed").empty()) r.seed = parse_int<std::uint64_t>(get("seed"));
        if (!get("chosen").empty()) r.chosen = parse_int<long long>(get("chosen"));
        if (!get("opt_index").empty()) r.opt_index = parse_int<std::size_t>(get("opt_index"));
        r.opt = parse_double(get("opt"));
        if (!get("achieved_tv").empty()) r.achieved_tv = parse_double(get("achieved_tv"));
        r.factor = parse_double(get("factor"));
        r.satisfied = get("satisfied_3opt_eps") == "1";
        r.oracle_queries = parse_int<std::uint64_t>(get("oracle_queries"));
        if (!get("samples_used").empty()) r.samples_used = parse_int<std::size_t>(get("samples_used"));
        r.wall_ms = parse_double(get("wall_ms"));
        if (!get("expected_tv").empty()) r.expected_tv = parse_double(get("expected_tv"));
        if (!get("expected_factor").empty()) r.expected_factor = parse_double(get("expected_factor"));
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json summarize(const std::vector<TrialReport>& rows) {
    if (rows.empty()) config_error("report has no rows");
    std::vector<std::string> order;
    std::map<std::string, std::vector<const TrialReport*>> by_algo;
    for (const auto& r : rows) {
        if (!by_algo.count(r.algo)) order.push_back(r.algo);
        by_algo[r.algo].push_back(&r);
    }
    nlohmann::json out = nlohmann::json::object();
    for (const auto& name : order) {
        const auto& rs = by_algo[name];
        std::size_t failures = 0;
        double queries = 0.0, wall = 0.0;
        std::vector<double> factors;
        for (const auto* r : rs) {
            if (!r->satisfied) ++failures;
            queries += static_cast<double>(r->oracle_queries);
            wall += r->wall_ms;
            double f = r->expected_factor ? *r->expected_factor : r->factor;
            if (r->opt > 0.0 && !std::isnan(f)) factors.push_back(f);
        }
        const double cnt = static_cast<double>(rs.size());
        nlohmann::json s;
        s["trials"] = rs.size();
        s["failure_fraction"] = static_cast<double>(failures) / cnt;
        s["mean_queries"] = queries / cnt;
        s["mean_wall_ms"] = wall / cnt;
        s["factor_count"] = factors.size();
        if (factors.empty()) {
            s["factor_mean"] = nullptr;
            s["factor_median"] = nullptr;
            s["factor_p95"] = nullptr;
        } else {
            double sum = 0.0;
            for (double f : factors) sum += f;
            s["factor_mean"] = sum / static_cast<double>(factors.size());
            s["factor_median"] = percentile(factors, 0.5);
            s["factor_p95"] = percentile(factors, 0.95);
        }
        out[name] = s;
    }
    return {{"algorithms", out}};
}

}  // namespace hsel

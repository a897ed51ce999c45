#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hsel {

struct ExperimentConfig {
    std::string family = "planted";  // planted | hard-expected | paired | file
    std::size_t n = 50;
    std::size_t d = 400;
    double target_opt = 0.1;  // planted
    std::size_t k = 6;        // hard-expected
    std::size_t ell = 5;
    std::size_t k_dom = 64;   // paired
    double family_eps = 0.2;
    std::string instance;     // file

    std::vector<std::string> algorithms{"minw", "mlw", "quantile", "fast", "knownopt", "tournament"};
    double eps = 0.1;
    double delta = 0.1;
    std::size_t trials = 20;
    std::uint64_t master_seed = 1;
    std::string opt = "auto";   // "auto" or a number
    std::string diam = "exact"; // "exact" or "approx:A"
    std::size_t sample_size = 0;  // 0: sized from n, eps, delta
    std::size_t threads = 0;      // 0: hardware concurrency
    bool timing = false;          // off keeps wall_ms at 0 so reruns match byte for byte
};

const std::vector<std::string>& known_algorithms();

// Throws Error(Config) on unknown keys or out-of-range values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

struct TrialReport {
    std::size_t trial = 0;
    std::string algo;
    std::size_t n = 0, d = 0;
    double eps = 0.0, delta = 0.0;
    std::uint64_t seed = 0;
    long long chosen = -1;  // -1 when the selector declined (opt infeasible)
    std::size_t opt_index = 0;
    double opt = 0.0;
    double achieved_tv = 0.0;
    double factor = 0.0;    // achieved_tv / opt, or -1 when opt is 0
    bool satisfied = false; // achieved_tv <= 3 opt + eps; (3 - 2/n) opt + eps on expected_tv for mixtures
    std::uint64_t oracle_queries = 0;
    std::size_t samples_used = 0;
    double wall_ms = 0.0;
    std::optional<double> expected_tv;
    std::optional<double> expected_factor;
};

std::vector<TrialReport> run_trial(const ExperimentConfig& c, std::size_t trial);

// Trials run on a worker pool; rows come back in trial order, then in the
// configured algorithm order.
std::vector<TrialReport> run_trials(const ExperimentConfig& c);

void write_csv(std::ostream& out, const std::vector<TrialReport>& rows);
std::vector<TrialReport> read_csv(std::istream& in);

// Per algorithm: failure fraction, factor mean / median / p95 over rows with
// opt > 0, mean oracle queries and mean wall time.
nlohmann::json summarize(const std::vector<TrialReport>& rows);

}  // namespace hsel

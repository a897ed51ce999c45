#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hsel/distribution.hpp"
#include "hsel/error.hpp"
#include "hsel/harness.hpp"

using namespace hsel;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 8;
    c.d = 40;
    c.trials = 3;
    c.eps = 0.2;
    c.delta = 0.2;
    c.threads = 2;
    c.algorithms = {"minw", "mlw", "quantile", "fast", "knownopt", "tournament", "expected"};
    return c;
}

std::string csv_of(const std::vector<TrialReport>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "hsel_tests";
    fs::create_directories(dir);
    return dir / name;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(HSEL_BINARY) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("config parsing rejects bad input") {
    auto expect_config_error = [](const json& j) {
        try {
            validate(config_from_json(j));
            FAIL("accepted " << j.dump());
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Config);
        }
    };
    expect_config_error({{"bogus", 1}});
    expect_config_error({{"eps", 0.0}});
    expect_config_error({{"eps", 1.0}});
    expect_config_error({{"delta", -0.1}});
    expect_config_error({{"algorithms", {"minw", "nope"}}});
    expect_config_error({{"family", "other"}});
    expect_config_error({{"diam", "approx:2"}});
    expect_config_error({{"opt", "abc"}});
    expect_config_error({{"trials", -1}});
    expect_config_error({{"n", "ten"}});

    auto c = config_from_json({{"n", 12}, {"algorithms", {"fast"}}, {"seed", 9}});
    CHECK(c.n == 12);
    CHECK(c.master_seed == 9);
    auto back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("zero trials give a header-only report") {
    auto c = small_config();
    c.trials = 0;
    auto rows = run_trials(c);
    CHECK(rows.empty());
    std::string text = csv_of(rows);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.rfind("# hsel-trials v1\ntrial,algo,", 0) == 0);
}

TEST_CASE("rows are consistent and round-trip through csv") {
    auto c = small_config();
    auto rows = run_trials(c);
    REQUIRE(rows.size() == c.trials * c.algorithms.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        CHECK(row.trial == r / c.algorithms.size());
        CHECK(row.algo == c.algorithms[r % c.algorithms.size()]);
        CHECK(row.samples_used <= harness_sample_size(c.n, c.eps, c.delta));
        if (row.chosen < 0) continue;
        CHECK(row.achieved_tv >= row.opt - 1e-12);
        if (row.opt > 0) CHECK(row.factor == doctest::Approx(row.achieved_tv / row.opt));
        else CHECK(row.factor == -1.0);
        if (row.algo == "expected") {
            REQUIRE(row.expected_tv.has_value());
            double bound = (3.0 - 2.0 / c.n) * row.opt + c.eps;
            CHECK(row.satisfied == (*row.expected_tv <= bound + 1e-12));
        } else {
            CHECK(row.satisfied == (row.achieved_tv <= 3 * row.opt + c.eps + 1e-12));
        }
    }
    std::istringstream in(csv_of(rows));
    auto back = read_csv(in);
    CHECK(csv_of(back) == csv_of(rows));
}

TEST_CASE("reruns are byte identical regardless of thread count") {
    auto c = small_config();
    std::string a = csv_of(run_trials(c));
    c.threads = 1;
    std::string b = csv_of(run_trials(c));
    CHECK(a == b);
    c.master_seed = 2;
    CHECK(csv_of(run_trials(c)) != a);
}

TEST_CASE("other families run") {
    auto c = small_config();
    c.family = "hard-expected";
    c.n = 3;
    c.k = 2;
    c.ell = 3;
    c.trials = 2;
    CHECK(run_trials(c).size() == 2 * c.algorithms.size());
    c.family = "paired";
    c.n = 6;
    c.k_dom = 16;
    CHECK(run_trials(c).size() == 2 * c.algorithms.size());
}

TEST_CASE("summary statistics") {
    std::vector<TrialReport> rows(4);
    for (std::size_t i = 0; i < 4; ++i) {
        rows[i].trial = i;
        rows[i].algo = "minw";
        rows[i].satisfied = i != 2;
        rows[i].opt = i == 3 ? 0.0 : 0.1;
        rows[i].achieved_tv = 0.1 * (i + 1);
        rows[i].factor = rows[i].opt > 0 ? rows[i].achieved_tv / rows[i].opt : -1;
        rows[i].oracle_queries = 10 * (i + 1);
    }
    auto s = summarize(rows)["algorithms"]["minw"];
    CHECK(s["trials"] == 4);
    CHECK(s["failure_fraction"].get<double>() == doctest::Approx(0.25));
    CHECK(s["factor_count"] == 3);
    CHECK(s["factor_mean"].get<double>() == doctest::Approx(2.0));
    CHECK(s["factor_median"].get<double>() == doctest::Approx(2.0));
    CHECK(s["factor_p95"].get<double>() == doctest::Approx(3.0));
    CHECK(s["mean_queries"].get<double>() == doctest::Approx(25.0));

    std::vector<TrialReport> one(1);
    one[0].algo = "fast";
    one[0].satisfied = true;
    CHECK(summarize(one)["algorithms"]["fast"]["failure_fraction"].get<double>() == 0.0);
    CHECK_THROWS_AS(summarize({}), Error);
}

TEST_CASE("command line end to end") {
    auto inst = scratch("inst.json");
    auto cfg = scratch("cfg.json");
    auto csv1 = scratch("r1.csv");
    auto csv2 = scratch("r2.csv");
    auto summary = scratch("summary.json");

    CHECK(run_cli("gen --family planted --n 6 --d 30 --seed 3 --out " + inst.string()) == 0);
    CHECK(run_cli("gen --family hard-expected --n 2 --k 3 --ell 5 --out " + scratch("h.json").string()) == 0);
    CHECK(run_cli("gen --family paired --n 4 --k-dom 8 --out " + scratch("p.json").string()) == 0);
    write_file(cfg, json{{"family", "file"}, {"instance", inst.string()}, {"trials", 3},
                         {"algorithms", {"minw", "fast"}}, {"eps", 0.2}}.dump());
    CHECK(run_cli("run --config " + cfg.string() + " --out " + csv1.string()) == 0);
    CHECK(run_cli("run --config " + cfg.string() + " --threads 1 --out " + csv2.string()) == 0);
    std::stringstream a, b;
    a << std::ifstream(csv1).rdbuf();
    b << std::ifstream(csv2).rdbuf();
    CHECK(a.str() == b.str());
    CHECK(run_cli("report " + csv1.string() + " --out " + summary.string()) == 0);
    auto s = json::parse(std::ifstream(summary));
    CHECK(s["algorithms"]["minw"]["trials"] == 3);
    CHECK(s["algorithms"]["fast"]["trials"] == 3);

    // overrides from the command line
    CHECK(run_cli("run --config " + cfg.string() + " --algo mlw,tournament --diam approx:0.2 --trials 2 --out " +
                  csv2.string()) == 0);

    // configuration errors
    CHECK(run_cli("") == 2);
    CHECK(run_cli("run --config " + cfg.string() + " --algo nope --out " + csv2.string()) == 2);
    CHECK(run_cli("run --config " + cfg.string() + " --eps 2 --out " + csv2.string()) == 2);
    CHECK(run_cli("run --config " + cfg.string() + " --diam approx --out " + csv2.string()) == 2);
    CHECK(run_cli("gen --family nope --out " + scratch("x.json").string()) == 2);
    write_file(scratch("bad.json"), "{\"unknown\": 1}");
    CHECK(run_cli("run --config " + scratch("bad.json").string() + " --out " + csv2.string()) == 2);

    // runtime errors
    CHECK(run_cli("run --config " + scratch("missing.json").string() + " --out " + csv2.string()) == 3);
    write_file(scratch("nofile.json"), json{{"family", "file"}, {"instance", scratch("none.json").string()}}.dump());
    CHECK(run_cli("run --config " + scratch("nofile.json").string() + " --out " + csv2.string()) == 3);
    CHECK(run_cli("report " + scratch("missing.csv").string() + " --out " + summary.string()) == 3);
}

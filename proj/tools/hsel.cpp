#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsel/error.hpp"
#include "hsel/harness.hpp"
#include "hsel/instance_io.hpp"
#include "hsel/instances.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct GenArgs {
    std::string family = "planted";
    std::size_t n = 10, d = 100, k = 6, ell = 5, k_dom = 16;
    double target_opt = 0.1, family_eps = 0.2;
    std::size_t true_index = 0;
    std::uint64_t seed = 1;
    std::string out;
};

hsel::InstanceData generate(const GenArgs& a) {
    hsel::InstanceData inst;
    hsel::Rng rng(a.seed);
    if (a.family == "planted") {
        auto p = hsel::gen_planted(a.n, a.d, a.target_opt, a.seed);
        inst.hypotheses = std::move(p.hypotheses);
        inst.truth = std::move(p.truth);
    } else if (a.family == "hard-expected") {
        auto h = hsel::gen_hard_expected(a.n, a.k, a.ell);
        if (a.true_index >= a.n) hsel::fail(hsel::ErrorKind::Config, "--true-index out of range");
        inst.truth = h.sample_truth(a.true_index, rng);
        inst.hypotheses = std::move(h.hypotheses);
    } else if (a.family == "paired") {
        for (std::size_t i = 0; i < a.n; ++i)
            inst.hypotheses.push_back(
                hsel::gen_paired_member(a.k_dom, a.family_eps, hsel::random_mask(a.k_dom / 2, rng)));
        inst.truth = hsel::gen_paired_member(a.k_dom, a.family_eps, hsel::random_mask(a.k_dom / 2, rng));
    } else {
        hsel::fail(hsel::ErrorKind::Config, "unknown family '" + a.family + "'");
    }
    inst.domain_size = inst.hypotheses.front().domain_size();
    return inst;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const hsel::Error& e) {
        std::cerr << "hsel: " << e.what() << '\n';
        return e.kind() == hsel::ErrorKind::Config || e.kind() == hsel::ErrorKind::InvalidArgument ||
                       e.kind() == hsel::ErrorKind::InvalidDistribution ||
                       e.kind() == hsel::ErrorKind::DomainMismatch
                   ? kConfigError
                   : kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "hsel: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypothesis selection experiments"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
    gen_cmd->add_option("--family", gen.family, "planted, hard-expected or paired")
        ->check(CLI::IsMember({"planted", "hard-expected", "paired"}));
    gen_cmd->add_option("--n", gen.n, "number of hypotheses");
    gen_cmd->add_option("--d", gen.d, "domain size (planted)");
    gen_cmd->add_option("--target-opt", gen.target_opt, "distance of the truth (planted)");
    gen_cmd->add_option("--k", gen.k, "intervals per block (hard-expected)");
    gen_cmd->add_option("--ell", gen.ell, "interval length (hard-expected)");
    gen_cmd->add_option("--true-index", gen.true_index, "index of the truth (hard-expected)");
    gen_cmd->add_option("--k-dom", gen.k_dom, "even domain size (paired)");
    gen_cmd->add_option("--family-eps", gen.family_eps, "pair imbalance (paired)");
    gen_cmd->add_option("--seed", gen.seed, "seed");
    gen_cmd->add_option("--out", gen.out, "output path")->required();

    std::string config_path, out_csv, algos, opt, diam;
    double eps = 0, delta = 0;
    std::size_t trials = 0, threads = 0;
    std::uint64_t seed = 0;
    bool timing = false;
    auto* run_cmd = app.add_subcommand("run", "Run trials and write a CSV report");
    run_cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    auto* o_algo = run_cmd->add_option("--algo", algos, "comma-separated algorithm names");
    auto* o_eps = run_cmd->add_option("--eps", eps);
    auto* o_delta = run_cmd->add_option("--delta", delta);
    auto* o_trials = run_cmd->add_option("--trials", trials);
    auto* o_seed = run_cmd->add_option("--seed", seed, "master seed");
    auto* o_opt = run_cmd->add_option("--opt", opt, "auto or a value");
    auto* o_diam = run_cmd->add_option("--diam", diam, "exact or approx:A");
    auto* o_threads = run_cmd->add_option("--threads", threads);
    run_cmd->add_flag("--timing", timing, "record wall time per call");
    run_cmd->add_option("--out", out_csv, "CSV output path")->required();

    std::string report_in, report_out;
    auto* rep_cmd = app.add_subcommand("report", "Summarize a CSV report");
    rep_cmd->add_option("results", report_in)->required();
    rep_cmd->add_option("--out", report_out, "summary JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (*gen_cmd)
        return guarded([&] { hsel::save_instance(generate(gen), gen.out); });

    if (*run_cmd)
        return guarded([&] {
            std::ifstream in(config_path);
            if (!in) hsel::fail(hsel::ErrorKind::Io, "cannot open " + config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                hsel::fail(hsel::ErrorKind::Config, config_path + ": " + e.what());
            }
            hsel::ExperimentConfig c = hsel::config_from_json(j);
            if (*o_algo) {
                c.algorithms.clear();
                std::stringstream ss(algos);
                for (std::string a; std::getline(ss, a, ',');) c.algorithms.push_back(a);
            }
            if (*o_eps) c.eps = eps;
            if (*o_delta) c.delta = delta;
            if (*o_trials) c.trials = trials;
            if (*o_seed) c.master_seed = seed;
            if (*o_opt) c.opt = opt;
            if (*o_diam) c.diam = diam;
            if (*o_threads) c.threads = threads;
            if (timing) c.timing = true;
            hsel::validate(c);
            auto rows = hsel::run_trials(c);
            std::ofstream out(out_csv);
            if (!out) hsel::fail(hsel::ErrorKind::Io, "cannot write " + out_csv);
            hsel::write_csv(out, rows);
        });

    return guarded([&] {
        std::ifstream in(report_in);
        if (!in) hsel::fail(hsel::ErrorKind::Io, "cannot open " + report_in);
        auto summary = hsel::summarize(hsel::read_csv(in));
        std::ofstream out(report_out);
        if (!out) hsel::fail(hsel::ErrorKind::Io, "cannot write " + report_out);
        out << summary.dump(2) << '\n';
    });
}

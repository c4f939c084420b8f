#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghl/harness.hpp"
#include "ghl/serialize.hpp"
#include "ghl/theorems.hpp"

namespace {

using ghl::ExperimentConfig;

ExperimentConfig make_config(const std::string& config_path) {
    if (config_path.empty()) return ExperimentConfig{};
    return ghl::load_config(config_path);
}

void print_summary(const ghl::RunSummary& summary) {
    std::printf("family=%s trials=%d applicable=%d passed=%d min_margin=%s wall=%.3fs\n",
                summary.family.c_str(), summary.trials, summary.applicable,
                summary.passed, summary.min_margin.str().c_str(),
                summary.wall_time_sec);
}

int aggregate_reports(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        std::fprintf(stderr, "not a directory: %s\n", dir.c_str());
        return 2;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 13 && name.substr(name.size() - 13) == "_summary.json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::fprintf(stderr, "no *_summary.json files under %s\n", dir.c_str());
        return 2;
    }
    bool all_ok = true;
    std::printf("%-20s %8s %10s %8s %s\n", "family", "trials", "applicable", "passed",
                "min_margin");
    for (const auto& path : files) {
        auto j = nlohmann::json::parse(ghl::read_text_file(path.string()));
        const int applicable = j.value("applicable", 0);
        const int passed = j.value("passed", 0);
        std::string margin = j.at("min_margin").is_string()
                                 ? j.at("min_margin").get<std::string>()
                                 : ghl::format_double(j.at("min_margin").get<double>());
        std::printf("%-20s %8d %10d %8d %s\n", j.value("family", "?").c_str(),
                    j.value("trials", 0), applicable, passed, margin.c_str());
        all_ok = all_ok && passed == applicable;
    }
    std::printf(all_ok ? "all applicable checks passed\n"
                       : "FAIL: some applicable checks failed\n");
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"goodhart-lab: exact finite-instance checks of reward-misspecification "
                 "bounds, Goldilocks sweeps, and communication-protocol limits"};
    app.require_subcommand(1);

    std::string config_path, out_dir, family, target;
    std::uint64_t seed = 0;
    bool seed_set = false, trials_set = false, out_set = false;
    int trials = 0;

    auto* verify = app.add_subcommand(
        "verify", "run a verification family (thm1|thm2|lemmas|protocols)");
    verify->add_option("family", family, "thm1|thm2|lemmas|protocols")->required();
    verify->add_option("--config", config_path, "config JSON path");
    verify->add_option("--trials", trials, "trial count")->each([&](const std::string&) {
        trials_set = true;
    });
    verify->add_option("--seed", seed, "seed")->each([&](const std::string&) {
        seed_set = true;
    });
    verify->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
        out_set = true;
    });

    double lambda_min = 0, lambda_max = 0;
    int points = 0;
    bool lmin_set = false, lmax_set = false, pts_set = false;
    std::string base;
    auto* curve = app.add_subcommand(
        "curve",
        "emit a pressure-value curve; pressure is the coefficient of the "
        "natural-base exponential tilt (nats), information stays in bits");
    curve->add_option("target", target, "goldilocks")->required();
    curve->add_option("--config", config_path, "config JSON path");
    curve->add_option("--lambda-min", lambda_min,
                      "smallest positive pressure (natural-log units)")
        ->each([&](const std::string&) { lmin_set = true; });
    curve->add_option("--lambda-max", lambda_max, "largest pressure")
        ->each([&](const std::string&) { lmax_set = true; });
    curve->add_option("--points", points, "number of positive-pressure points")
        ->each([&](const std::string&) { pts_set = true; });
    curve->add_option("--base", base,
                      "anchor distribution: p0 (optimal uninformed) or uniform");
    curve->add_option("--seed", seed, "seed")->each([&](const std::string&) {
        seed_set = true;
    });
    curve->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
        out_set = true;
    });

    double k_bits = 0;
    bool kbits_set = false;
    auto* search = app.add_subcommand("search", "search for a Goldilocks witness");
    search->add_option("target", target, "goldilocks")->required();
    search->add_option("--config", config_path, "config JSON path");
    search->add_option("--k-bits", k_bits, "information budget in bits")
        ->each([&](const std::string&) { kbits_set = true; });
    search->add_option("--seed", seed, "seed")->each([&](const std::string&) {
        seed_set = true;
    });
    search->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
        out_set = true;
    });

    int demo_n = 8;
    double safe_prob = 0.25, v_dagger = 0.5, epsilon = 0.25;
    auto* demo = app.add_subcommand("demo", "safe-set information identity demo");
    demo->add_option("target", target, "safe-set")->required();
    demo->add_option("--n", demo_n, "number of outcomes (enumerates 2^n patterns)");
    demo->add_option("--safe-prob", safe_prob, "independent safety probability");
    demo->add_option("--v-dagger", v_dagger, "safety threshold");
    demo->add_option("--epsilon", epsilon, "small baseline level for the approximation");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "aggregate run summaries");
    report->add_option("--in", report_dir, "directory of *_summary.json files")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            ExperimentConfig config = make_config(config_path);
            config.family = family;
            if (seed_set) config.seed = seed;
            if (trials_set) config.trials = trials;
            if (out_set) config.out_dir = out_dir;
            auto summary = ghl::run_experiment(config);
            print_summary(summary);
            return summary.ok() ? 0 : 1;
        }
        if (curve->parsed()) {
            if (target != "goldilocks") throw ghl::ConfigError("unknown curve target");
            ExperimentConfig config = make_config(config_path);
            if (seed_set) config.seed = seed;
            if (out_set) config.out_dir = out_dir;
            if (lmin_set) config.lambda_min = lambda_min;
            if (lmax_set) config.lambda_max = lambda_max;
            if (pts_set) config.lambda_points = points;
            if (!base.empty()) config.base = base;
            auto summary = ghl::run_goldilocks_curve(config);
            print_summary(summary);
            return 0;
        }
        if (search->parsed()) {
            if (target != "goldilocks") throw ghl::ConfigError("unknown search target");
            ExperimentConfig config = make_config(config_path);
            if (seed_set) config.seed = seed;
            if (out_set) config.out_dir = out_dir;
            if (kbits_set) config.k_bits = k_bits;
            auto res = ghl::run_goldilocks_search(config);
            std::printf("applicable=%d found=%d eta=%lld/%lld width=%d lambda=%s "
                        "mi_bits=%s v_lambda=%s v0=%s\n",
                        res.applicable ? 1 : 0, res.found ? 1 : 0,
                        static_cast<long long>(res.eta.num),
                        static_cast<long long>(res.eta.denom), res.width_factor,
                        ghl::format_double(res.lambda).c_str(),
                        ghl::format_double(res.mi_bits).c_str(),
                        ghl::format_double(res.v_lambda).c_str(),
                        ghl::format_double(res.v0).c_str());
            return res.applicable && !res.found ? 1 : 0;
        }
        if (demo->parsed()) {
            if (target != "safe-set") throw ghl::ConfigError("unknown demo target");
            auto res = ghl::safe_set_demo(demo_n, safe_prob, v_dagger, epsilon);
            std::printf("n=%d safe_prob=%s empty_mass=%s\n", res.n_outcomes,
                        ghl::format_double(res.safe_prob).c_str(),
                        ghl::format_double(res.empty_set_prob).c_str());
            std::printf("mi_bits=%s expected_log_ratio_bits=%s residual=%s\n",
                        ghl::format_double(res.mi_bits).c_str(),
                        ghl::format_double(res.expected_log_ratio_bits).c_str(),
                        ghl::format_double(res.identity_residual).c_str());
            std::printf("kl_factor_bits=%s approx_bits=%s gap=%s\n",
                        ghl::format_double(res.kl_factor_bits).c_str(),
                        ghl::format_double(res.approx_bits).c_str(),
                        ghl::format_double(res.approximation_gap).c_str());
            return res.identity_residual <= 1e-9 ? 0 : 1;
        }
        if (report->parsed()) {
            return aggregate_reports(report_dir);
        }
    } catch (const ghl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

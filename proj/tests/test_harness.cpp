#include <cmath>
#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "ghl/harness.hpp"
#include "ghl/serialize.hpp"
#include "ghl/theorems.hpp"
#include "ghl/valuation.hpp"

using namespace ghl;

namespace {

std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("ghl_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("generated instances are reproducible byte for byte") {
    SizesSpec sizes;
    auto a = gen_thm1_instance(77, 3, sizes, ChannelMenuSpec{true, {1}, 1});
    auto b = gen_thm1_instance(77, 3, sizes, ChannelMenuSpec{true, {1}, 1});
    CHECK(to_json(a.prior).dump() == to_json(b.prior).dump());
    REQUIRE(a.channels.size() == b.channels.size());
    for (std::size_t i = 0; i < a.channels.size(); ++i) {
        CHECK(to_json(a.channels[i].second).dump() ==
              to_json(b.channels[i].second).dump());
    }
    auto c = gen_thm1_instance(78, 3, sizes, ChannelMenuSpec{true, {1}, 1});
    CHECK(to_json(a.prior).dump() != to_json(c.prior).dump());
}

TEST_CASE("thm1 instances satisfy their preconditions by construction") {
    SizesSpec sizes;
    sizes.n_outcomes = 3;
    sizes.n_policies = 3;
    sizes.n_envs = 2;
    for (int rep = 0; rep < 25; ++rep) {
        auto inst = gen_thm1_instance(4100, rep, sizes, ChannelMenuSpec{false, {}, 0});
        CHECK(inst.prior.iid_rewards());
        CHECK(check_reward_env_independence(inst.prior));
        CHECK(inst.prior.reward_support().size() <= 8);
    }
}

TEST_CASE("degenerate one-policy worlds make every channel contemporary") {
    SizesSpec sizes;
    sizes.n_policies = 2;  // draws in [2, n]; force the floor with n_policies = 2
    auto inst = gen_thm1_instance(4200, 0, sizes, ChannelMenuSpec{true, {0, 1}, 0});
    // restrict to a genuinely single-policy world
    FiniteModel::EnvMatrix env{inst.prior.model().env(0)[0]};
    FiniteModel single(inst.prior.model().n_outcomes(), 1, {env});
    WorldPrior prior(single, inst.prior.ensemble(),
                     inst.prior.atoms(), inst.prior.atom_probs().probs(), true);
    double v0 = contemporary_value(prior);
    CHECK(executed_value(prior, make_identity_channel(prior)) ==
          doctest::Approx(v0).epsilon(1e-12));
    CHECK(executed_value(prior, make_quantizer_channel(prior, 0)) ==
          doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("goldilocks generator postconditions") {
    for (int rep = 0; rep < 5; ++rep) {
        WorldPrior prior = gen_goldilocks_instance(5100 + rep, rep, 0.05);
        CHECK(uninformed_policy_variation(prior));
        BaselineReport b = primordial_quantities(prior, PrimordialMode::grid_search);
        double v0 = contemporary_value(prior);
        CHECK(v0 - (b.primordial_value + std::sqrt(b.primordial_variance)) >= 0.05);
        CHECK(executed_value(prior, make_identity_channel(prior)) >= v0 - 1e-9);
    }
}

TEST_CASE("run_experiment writes deterministic outputs") {
    ExperimentConfig config;
    config.family = "thm1";
    config.trials = 6;
    config.seed = 9001;
    config.sizes.n_outcomes = 4;
    config.sizes.n_policies = 3;
    config.sizes.n_envs = 2;
    config.out_dir = temp_dir("thm1_a");
    RunSummary s1 = run_experiment(config);
    CHECK(s1.trials == 30);  // 6 instances x 5 channels
    CHECK(s1.applicable <= s1.trials);
    CHECK(s1.applicable >= 1);
    CHECK(s1.passed == s1.applicable);

    std::string csv1 = read_text_file(config.out_dir + "/thm1_results.csv");
    std::string sum1 = read_text_file(config.out_dir + "/thm1_summary.json");
    config.out_dir = temp_dir("thm1_b");
    run_experiment(config);
    CHECK(read_text_file(config.out_dir + "/thm1_results.csv") == csv1);
    CHECK(read_text_file(config.out_dir + "/thm1_summary.json") == sum1);
}

TEST_CASE("lemmas and protocols families pass on small runs") {
    ExperimentConfig config;
    config.family = "lemmas";
    config.trials = 10;
    config.seed = 31337;
    config.sizes.n_outcomes = 4;
    config.sizes.n_policies = 3;
    config.out_dir = temp_dir("lemmas");
    RunSummary lemmas = run_experiment(config);
    CHECK(lemmas.applicable > 0);
    CHECK(lemmas.ok());

    config.family = "protocols";
    config.out_dir = temp_dir("protocols");
    RunSummary protocols = run_experiment(config);
    CHECK(protocols.ok());

    config.family = "unknown";
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
}

TEST_CASE("config json round trip") {
    ExperimentConfig config;
    config.seed = 42;
    config.family = "thm2";
    config.trials = 17;
    config.sizes.n_outcomes = 9;
    config.menu.quantizer_bits = {0, 3};
    config.v_rule = VdaggerRule::midpoint;
    ExperimentConfig back = config_from_json(config_to_json(config));
    CHECK(config_to_json(back) == config_to_json(config));
    CHECK_THROWS_AS(config_from_json({{"trials", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"v_dagger_rule", "nonsense"}}), ConfigError);
}

TEST_CASE("goldilocks curve emission and plotting") {
    ExperimentConfig config;
    config.seed = 7;
    config.out_dir = temp_dir("curve");
    config.lambda_points = 12;
    config.base = "p0";
    config.menu.quantizer_bits = {1};
    RunSummary summary = run_goldilocks_curve(config);
    std::string csv = read_text_file(config.out_dir + "/goldilocks_curve.csv");
    CHECK(csv.rfind("# ghl-csv/1", 0) == 0);
    std::string svg = read_text_file(config.out_dir + "/goldilocks_curve.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    // byte determinism of the whole artifact set
    std::string out2 = temp_dir("curve2");
    config.out_dir = out2;
    run_goldilocks_curve(config);
    CHECK(read_text_file(out2 + "/goldilocks_curve.csv") == csv);
    CHECK(read_text_file(out2 + "/goldilocks_curve.svg") == svg);

    // malformed inputs
    std::string bad = temp_dir("badcsv") + "/empty.csv";
    write_text_file(bad, "# ghl-csv/1\nlambda,value,v0,vbar,vbar_plus_half_sigma\n");
    CHECK_THROWS_AS(emit_plot(bad, bad + ".svg"), MalformedCsv);
    write_text_file(bad, "");
    CHECK_THROWS_AS(emit_plot(bad, bad + ".svg"), MalformedCsv);
}

TEST_CASE("plotted goldilocks curve rises above the contemporary line") {
    ExperimentConfig config;
    config.seed = 11;
    config.out_dir = temp_dir("curve_rise");
    config.base = "p0";
    config.menu.quantizer_bits = {};  // full-information channel
    config.lambda_points = 16;
    run_goldilocks_curve(config);
    std::string csv = read_text_file(config.out_dir + "/goldilocks_curve.csv");
    std::istringstream in(csv);
    std::string line;
    bool rises = false;
    int data_rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("lambda", 0) == 0) continue;
        data_rows += 1;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> fields;
        while (std::getline(row, cell, ',')) fields.push_back(std::stod(cell));
        if (fields[1] > fields[2] + 1e-9) rises = true;
    }
    CHECK(data_rows >= 17);
    CHECK(rises);
}

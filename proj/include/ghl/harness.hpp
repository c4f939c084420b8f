#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ghl/rng.hpp"
#include "ghl/theorems.hpp"
#include "ghl/world.hpp"

namespace ghl {

struct SizesSpec {
    int n_outcomes = 4;   // upper bound; trials draw 2..n
    int n_policies = 4;
    int n_envs = 2;
    int n_cells = 2;
    std::vector<std::int64_t> grid_num{0, 1000};
    std::int64_t grid_denom = 1000;
};

struct ChannelMenuSpec {
    bool identity = true;
    std::vector<int> quantizer_bits{0, 1, 2};
    int noise_channels = 1;
};

enum class VdaggerRule { equal_to_v_hat, midpoint, absolute };

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::string family = "thm1";  // thm1 | thm2 | lemmas | protocols
    SizesSpec sizes;
    ChannelMenuSpec menu;
    VdaggerRule v_rule = VdaggerRule::equal_to_v_hat;
    double v_dagger_abs = 0.5;
    int trials = 100;
    double lambda_min = 1e-2;
    double lambda_max = 1e6;
    int lambda_points = 33;
    double k_bits = 1.0;
    double goldilocks_gap = 0.05;
    std::string base = "p0";  // p0 | uniform, for curve emission
    std::string out_dir = "out";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

struct GeneratedInstance {
    WorldPrior prior;
    std::vector<std::pair<std::string, ProxyChannel>> channels;
};

// iid rewards from a random grid marginal, environments independent of
// rewards; preconditions of the information bound hold by construction.
GeneratedInstance gen_thm1_instance(std::uint64_t seed, std::uint64_t trial,
                                    const SizesSpec& sizes, const ChannelMenuSpec& menu);

struct GeneratedCellInstance {
    WorldPrior prior;
    OutcomePartition partition;
    std::vector<std::pair<std::string, ProxyChannel>> channels;
};

GeneratedCellInstance gen_thm2_instance(std::uint64_t seed, std::uint64_t trial,
                                        const SizesSpec& sizes, const ChannelMenuSpec& menu);

// Non-iid prior with a reliable adaptive policy pair (tied under the prior
// but split per realization) and environment-mirrored spike outcomes, so the
// contemporary value strictly exceeds the grid-search primordial bound.
// Re-samples until the optimal-uninformed-variation condition holds and the
// gap is at least `gap`.
WorldPrior gen_goldilocks_instance(std::uint64_t seed, std::uint64_t trial, double gap,
                                   int max_resamples = 100);

struct RunSummary {
    std::string family;
    int trials = 0;
    int applicable = 0;
    int passed = 0;
    ExtReal min_margin = ExtReal::infinity();
    double wall_time_sec = 0.0;  // reported on stdout, not serialized
    std::vector<std::string> files;

    bool ok() const { return passed == applicable; }
};

nlohmann::json summary_to_json(const RunSummary& summary);

// Runs a verify family, writes <family>_results.csv and <family>_summary.json
// under config.out_dir.
RunSummary run_experiment(const ExperimentConfig& config);

// Goldilocks sweep over the pressure grid on a generated instance; writes
// goldilocks_curve.csv, goldilocks_curve.svg and a summary.
RunSummary run_goldilocks_curve(const ExperimentConfig& config);

// Witness search under the information budget; writes goldilocks_search.json.
GoldilocksSearchResult run_goldilocks_search(const ExperimentConfig& config);

// Static SVG line plot of a curve CSV with reference levels.
void emit_plot(const std::string& csv_path, const std::string& svg_path);

}  // namespace ghl

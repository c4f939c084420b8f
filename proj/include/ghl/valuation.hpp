#pragma once

#include <optional>
#include <vector>

#include "ghl/agent.hpp"
#include "ghl/world.hpp"

namespace ghl {

enum class PrimordialMode { exact_iid, grid_search };

struct BaselineReport {
    double contemporary_value = 0.0;
    double primordial_value = 0.0;
    double primordial_variance = 0.0;
    double primordial_positive_value = 0.0;
    double adversarial_value = 0.0;
    RewardTable best_uninformed_reward = RewardTable::constant(1, 0, 1);
    PrimordialMode search_mode = PrimordialMode::exact_iid;
};

struct AttainabilityProfile {
    std::vector<double> per_outcome;
    std::optional<std::vector<double>> per_cell;
    double sup_outcome = 0.0;
    std::optional<double> sup_cell;
};

// Expected true-reward value of the proxy-optimal policy.
double executed_value(const WorldPrior& prior, const ProxyChannel& channel,
                      const DistributionCatalog& catalog);
double executed_value(const WorldPrior& prior, const ProxyChannel& channel);

// Best prior-expected value over fixed policies.
double contemporary_value(const WorldPrior& prior);

// Primordial quantities. Exact mode uses the recorded value marginal and is
// valid when rewards are (cell-)iid and independent of the attainable sets;
// grid-search mode enumerates candidate reward tables and certifies a lower
// bound on the primordial value.
BaselineReport primordial_quantities(const WorldPrior& prior, PrimordialMode mode,
                                     std::int64_t candidate_cap = 20000);

// Expected value when the agent maximizes the negated true reward.
double adversarial_value(const WorldPrior& prior, const DistributionCatalog& catalog);
double adversarial_value(const WorldPrior& prior);

AttainabilityProfile attainability_profile(const WorldPrior& prior,
                                           const OutcomePartition* partition = nullptr);

// Convenience: primordial quantities plus contemporary and adversarial values.
BaselineReport baseline_report(const WorldPrior& prior, PrimordialMode mode);

}  // namespace ghl

#pragma once

#include <vector>

#include "ghl/world.hpp"

namespace ghl::testutil {

// Deterministic identity world: n outcomes, n policies, policy i -> outcome i.
inline FiniteModel identity_model(int n) {
    FiniteModel::EnvMatrix env;
    for (int pi = 0; pi < n; ++pi) {
        std::vector<double> row(n, 0.0);
        row[pi] = 1.0;
        env.push_back(std::move(row));
    }
    return FiniteModel(n, n, {env});
}

// iid {0,1} uniform rewards over the identity world.
inline WorldPrior binary_identity_prior(int n) {
    const std::int64_t grid[] = {0, 1000};
    RewardEnsemble ens = build_iid_reward_ensemble(n, grid, 1000, Pmf({0.5, 0.5}));
    return compose_prior(identity_model(n), std::move(ens), Pmf::uniform(1));
}

}  // namespace ghl::testutil

#pragma once

#include <map>
#include <vector>

#include "ghl/world.hpp"

namespace ghl {

// Fixed enumeration of all outcome distributions induced by any
// (environment, policy) pair, deduplicated by exact row equality in
// (environment, policy) scan order.
class DistributionCatalog {
public:
    explicit DistributionCatalog(const FiniteModel& model);

    std::size_t size() const { return entries_.size(); }
    const std::vector<std::vector<double>>& entries() const { return entries_; }
    const std::vector<std::pair<int, int>>& origins() const { return origins_; }

    int index_of(const std::vector<double>& row) const;  // throws RowNotInCatalog

private:
    std::vector<std::vector<double>> entries_;
    std::vector<std::pair<int, int>> origins_;
    std::map<std::vector<double>, int> index_;
};

inline DistributionCatalog catalog_distributions(const FiniteModel& model) {
    return DistributionCatalog(model);
}

// Reward-maximizing policy in the given environment. Scores are rounded at
// 1e-12 before comparison; ties go to the row with the smallest catalog
// index, then to the smallest policy index.
int select_policy(const FiniteModel::EnvMatrix& env, const RewardTable& reward,
                  const DistributionCatalog& catalog);

// Exponential tilt base(pi) * e^(lambda * f(pi)) / Z, natural base, computed
// with a max shift. Zero-mass base entries stay zero. Accepts any real
// lambda; the public regularized_policy restricts to lambda >= 0.
Pmf tilted_policy(const std::vector<double>& f, const Pmf& base, double lambda);

Pmf regularized_policy(const std::vector<double>& f_hat, const Pmf& base, double lambda);

struct UninformedOptimum {
    std::vector<int> optimal_policies;  // membership at 1e-9 relative tolerance
    Pmf base;                           // uniform over the optimal set
    double value;                       // best prior-expected policy value
    std::vector<double> policy_values;  // prior-expected value per policy
};

UninformedOptimum optimal_uninformed_set(const WorldPrior& prior);

// Replaces each codeword with the posterior-mean reward table given that
// codeword; rows are re-pointed and coinciding codewords merged. Projecting
// an already-coherent channel leaves the induced joint unchanged.
ProxyChannel coherent_projection(const WorldPrior& prior, const ProxyChannel& channel);

// Max per-outcome residual of the coherence identity (posterior mean of the
// true reward given a codeword minus the codeword itself).
double coherence_residual(const WorldPrior& prior, const ProxyChannel& channel);

}  // namespace ghl

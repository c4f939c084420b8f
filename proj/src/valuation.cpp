#include "ghl/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ghl {

namespace {

// Environment-marginal sums can overshoot 1 by float residue; the profile
// promises probabilities.
double clamp_prob(double v) {
    if (v > 1.0 && v <= 1.0 + 2e-9) return 1.0;
    if (v < 0.0 && v >= -2e-9) return 0.0;
    return v;
}

double policy_value(const FiniteModel& model, int env, int pi, const RewardTable& reward) {
    const auto& row = model.row(env, pi);
    double v = 0.0;
    for (std::size_t o = 0; o < row.size(); ++o) v += row[o] * reward.value(o);
    return v;
}

}  // namespace

double executed_value(const WorldPrior& prior, const ProxyChannel& channel,
                      const DistributionCatalog& catalog) {
    if (channel.n_atoms() != prior.reward_support().size()) {
        throw ChannelPriorMismatch("channel rows do not match prior support");
    }
    const auto& model = prior.model();
    double total = 0.0;
    for (std::size_t a = 0; a < prior.atoms().size(); ++a) {
        const auto& atom = prior.atoms()[a];
        const double pa = prior.atom_probs()[a];
        const auto& row = channel.row(atom.reward_idx);
        for (std::size_t c = 0; c < channel.n_codewords(); ++c) {
            if (row[c] <= 0.0) continue;
            int pi = select_policy(model.env(atom.env_idx), channel.codeword(c), catalog);
            total += pa * row[c] *
                     policy_value(model, atom.env_idx, pi,
                                  prior.reward_support()[atom.reward_idx]);
        }
    }
    return total;
}

double executed_value(const WorldPrior& prior, const ProxyChannel& channel) {
    DistributionCatalog catalog(prior.model());
    return executed_value(prior, channel, catalog);
}

double contemporary_value(const WorldPrior& prior) {
    return optimal_uninformed_set(prior).value;
}

namespace {

// Expected true reward, second moment and positive part of the outcome
// reached when the agent maximizes the fixed table `candidate`.
struct UninformedOutcomeMoments {
    double mean = 0.0;
    double second = 0.0;
    double positive = 0.0;
};

UninformedOutcomeMoments uninformed_moments(const WorldPrior& prior,
                                            const RewardTable& candidate,
                                            const DistributionCatalog& catalog) {
    const auto& model = prior.model();
    std::vector<int> chosen(model.n_envs());
    for (int e = 0; e < model.n_envs(); ++e) {
        chosen[e] = select_policy(model.env(e), candidate, catalog);
    }
    UninformedOutcomeMoments m;
    for (std::size_t a = 0; a < prior.atoms().size(); ++a) {
        const auto& atom = prior.atoms()[a];
        const double pa = prior.atom_probs()[a];
        const auto& row = model.row(atom.env_idx, chosen[atom.env_idx]);
        const auto& table = prior.reward_support()[atom.reward_idx];
        for (int o = 0; o < model.n_outcomes(); ++o) {
            double r = table.value(o);
            m.mean += pa * row[o] * r;
            m.second += pa * row[o] * r * r;
            m.positive += pa * row[o] * std::max(r, 0.0);
        }
    }
    return m;
}

std::vector<RewardTable> grid_search_candidates(const WorldPrior& prior,
                                                std::int64_t cap) {
    const int n = prior.model().n_outcomes();
    std::vector<RewardTable> out;
    double combos = std::pow(3.0, n);
    if (combos <= static_cast<double>(cap)) {
        std::vector<int> digit(n, 0);
        const auto total = static_cast<std::int64_t>(combos + 0.5);
        for (std::int64_t i = 0; i < total; ++i) {
            std::vector<std::int64_t> num(n);
            for (int o = 0; o < n; ++o) num[o] = digit[o] - 1;
            out.push_back(RewardTable::from_grid(std::move(num), 1));
            for (int o = n - 1; o >= 0; --o) {
                if (++digit[o] < 3) break;
                digit[o] = 0;
            }
        }
        return out;
    }
    // Too many sign tables: fall back to the support plus constants. The
    // result is still a certified lower bound.
    out = prior.reward_support();
    out.push_back(RewardTable::constant(n, -1, 1));
    out.push_back(RewardTable::constant(n, 0, 1));
    out.push_back(RewardTable::constant(n, 1, 1));
    return out;
}

}  // namespace

BaselineReport primordial_quantities(const WorldPrior& prior, PrimordialMode mode,
                                     std::int64_t candidate_cap) {
    BaselineReport report;
    report.search_mode = mode;
    if (mode == PrimordialMode::exact_iid) {
        if (!(prior.iid_rewards() || prior.cellwise())) {
            throw ModeUnsupported("exact mode needs an iid or cellwise ensemble");
        }
        if (!check_reward_env_independence(prior)) {
            throw ModeUnsupported("exact mode needs reward/attainable-set independence");
        }
        const auto& ens = prior.ensemble();
        double mean = 0.0, second = 0.0, positive = 0.0;
        for (std::size_t i = 0; i < ens.grid_num.size(); ++i) {
            double v = static_cast<double>(ens.grid_num[i]) /
                       static_cast<double>(ens.grid_denom);
            double p = ens.marginal_probs[i];
            mean += p * v;
            second += p * v * v;
            positive += p * std::max(v, 0.0);
        }
        report.primordial_value = mean;
        report.primordial_variance = std::max(0.0, second - mean * mean);
        report.primordial_positive_value = positive;
        // All uninformed reward functions tie in this regime.
        report.best_uninformed_reward =
            RewardTable::constant(prior.model().n_outcomes(), 0, 1);
        return report;
    }

    DistributionCatalog catalog(prior.model());
    auto candidates = grid_search_candidates(prior, candidate_cap);
    double best = -2.0;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double v = uninformed_moments(prior, candidates[i], catalog).mean;
        if (v > best) {
            best = v;
            best_idx = i;
        }
    }
    auto m = uninformed_moments(prior, candidates[best_idx], catalog);
    report.primordial_value = m.mean;
    report.primordial_variance = std::max(0.0, m.second - m.mean * m.mean);
    report.primordial_positive_value = m.positive;
    report.best_uninformed_reward = candidates[best_idx];
    return report;
}

double adversarial_value(const WorldPrior& prior, const DistributionCatalog& catalog) {
    const auto& model = prior.model();
    double total = 0.0;
    for (std::size_t a = 0; a < prior.atoms().size(); ++a) {
        const auto& atom = prior.atoms()[a];
        const auto& table = prior.reward_support()[atom.reward_idx];
        int pi = select_policy(model.env(atom.env_idx), table.negated(), catalog);
        total += prior.atom_probs()[a] * policy_value(model, atom.env_idx, pi, table);
    }
    return total;
}

double adversarial_value(const WorldPrior& prior) {
    DistributionCatalog catalog(prior.model());
    return adversarial_value(prior, catalog);
}

AttainabilityProfile attainability_profile(const WorldPrior& prior,
                                           const OutcomePartition* partition) {
    const auto& model = prior.model();
    const auto env_p = prior.env_marginal();
    AttainabilityProfile profile;
    profile.per_outcome.assign(model.n_outcomes(), 0.0);
    for (int e = 0; e < model.n_envs(); ++e) {
        for (int o = 0; o < model.n_outcomes(); ++o) {
            double alpha = 0.0;
            for (int pi = 0; pi < model.n_policies(); ++pi) {
                alpha = std::max(alpha, model.row(e, pi)[o]);
            }
            profile.per_outcome[o] += env_p[e] * alpha;
        }
    }
    for (auto& v : profile.per_outcome) v = clamp_prob(v);
    profile.sup_outcome =
        *std::max_element(profile.per_outcome.begin(), profile.per_outcome.end());

    if (partition != nullptr) {
        if (partition->n_outcomes() != model.n_outcomes()) {
            throw DimensionMismatch("partition outcome count differs from model");
        }
        std::vector<double> cells(partition->n_cells(), 0.0);
        for (int e = 0; e < model.n_envs(); ++e) {
            for (int c = 0; c < partition->n_cells(); ++c) {
                double alpha = 0.0;
                for (int pi = 0; pi < model.n_policies(); ++pi) {
                    double mass = 0.0;
                    for (int o : partition->members()[c]) mass += model.row(e, pi)[o];
                    alpha = std::max(alpha, mass);
                }
                cells[c] += env_p[e] * alpha;
            }
        }
        for (auto& v : cells) v = clamp_prob(v);
        profile.sup_cell = *std::max_element(cells.begin(), cells.end());
        profile.per_cell = std::move(cells);
    }
    return profile;
}

BaselineReport baseline_report(const WorldPrior& prior, PrimordialMode mode) {
    BaselineReport report = primordial_quantities(prior, mode);
    report.contemporary_value = contemporary_value(prior);
    report.adversarial_value = adversarial_value(prior);
    return report;
}

}  // namespace ghl

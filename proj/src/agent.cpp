#include "ghl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ghl {

DistributionCatalog::DistributionCatalog(const FiniteModel& model) {
    for (int e = 0; e < model.n_envs(); ++e) {
        for (int pi = 0; pi < model.n_policies(); ++pi) {
            const auto& row = model.row(e, pi);
            auto [it, inserted] = index_.try_emplace(row, static_cast<int>(entries_.size()));
            if (inserted) {
                entries_.push_back(row);
                origins_.emplace_back(e, pi);
            }
        }
    }
}

int DistributionCatalog::index_of(const std::vector<double>& row) const {
    auto it = index_.find(row);
    if (it == index_.end()) throw RowNotInCatalog("outcome distribution not enumerated");
    return it->second;
}

int select_policy(const FiniteModel::EnvMatrix& env, const RewardTable& reward,
                  const DistributionCatalog& catalog) {
    if (env.empty()) throw DomainError("environment with no policies");
    // Rounding at 1e-12 makes tie detection reproducible.
    auto score_key = [&](const std::vector<double>& row) {
        double s = 0.0;
        for (std::size_t o = 0; o < row.size(); ++o) s += row[o] * reward.value(o);
        return std::llround(s * 1e12);
    };
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::vector<int> argmax;
    for (int pi = 0; pi < static_cast<int>(env.size()); ++pi) {
        std::int64_t key = score_key(env[pi]);
        if (key > best) {
            best = key;
            argmax.assign(1, pi);
        } else if (key == best) {
            argmax.push_back(pi);
        }
    }
    int best_policy = argmax.front();
    int best_catalog = catalog.index_of(env[best_policy]);
    for (std::size_t j = 1; j < argmax.size(); ++j) {
        int c = catalog.index_of(env[argmax[j]]);
        if (c < best_catalog) {
            best_catalog = c;
            best_policy = argmax[j];
        }
    }
    return best_policy;
}

Pmf tilted_policy(const std::vector<double>& f, const Pmf& base, double lambda) {
    if (f.size() != base.size()) throw DimensionMismatch("f length differs from base");
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (base[i] > 0.0) shift = std::max(shift, lambda * f[i]);
    }
    std::vector<double> out(f.size(), 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (base[i] > 0.0) {
            out[i] = base[i] * std::exp(lambda * f[i] - shift);
            z += out[i];
        }
    }
    for (auto& p : out) p /= z;
    return Pmf(std::move(out));
}

Pmf regularized_policy(const std::vector<double>& f_hat, const Pmf& base, double lambda) {
    if (lambda < 0.0) throw DomainError("lambda must be nonnegative");
    return tilted_policy(f_hat, base, lambda);
}

UninformedOptimum optimal_uninformed_set(const WorldPrior& prior) {
    const auto& model = prior.model();
    std::vector<double> values(model.n_policies(), 0.0);
    for (std::size_t a = 0; a < prior.atoms().size(); ++a) {
        const auto& atom = prior.atoms()[a];
        const double p = prior.atom_probs()[a];
        const auto& table = prior.reward_support()[atom.reward_idx];
        for (int pi = 0; pi < model.n_policies(); ++pi) {
            const auto& row = model.row(atom.env_idx, pi);
            double f = 0.0;
            for (int o = 0; o < model.n_outcomes(); ++o) f += row[o] * table.value(o);
            values[pi] += p * f;
        }
    }
    double best = *std::max_element(values.begin(), values.end());
    double tol = 1e-9 * std::max(1.0, std::abs(best));
    UninformedOptimum out{.optimal_policies = {},
                          .base = Pmf::uniform(1),
                          .value = best,
                          .policy_values = values};
    for (int pi = 0; pi < model.n_policies(); ++pi) {
        if (values[pi] >= best - tol) out.optimal_policies.push_back(pi);
    }
    std::vector<double> p0(model.n_policies(), 0.0);
    for (int pi : out.optimal_policies) {
        p0[pi] = 1.0 / static_cast<double>(out.optimal_policies.size());
    }
    out.base = Pmf(std::move(p0));
    return out;
}

namespace {

// Posterior-mean table per codeword. Throws ZeroMarginal for dead codewords.
std::vector<RewardTable> posterior_mean_tables(const WorldPrior& prior,
                                               const ProxyChannel& channel) {
    const auto reward_p = prior.reward_marginal();
    std::vector<RewardTable> means;
    means.reserve(channel.n_codewords());
    for (std::size_t c = 0; c < channel.n_codewords(); ++c) {
        std::vector<std::size_t> idx;
        std::vector<double> weights;
        for (std::size_t i = 0; i < channel.n_atoms(); ++i) {
            double w = reward_p[i] * channel.row(i)[c];
            if (w > 0.0) {
                idx.push_back(i);
                weights.push_back(w);
            }
        }
        if (idx.empty()) {
            throw ZeroMarginal("codeword " + std::to_string(c) + " has zero mass");
        }
        means.push_back(mixture_mean_table(prior.reward_support(), idx, weights));
    }
    return means;
}

}  // namespace

ProxyChannel coherent_projection(const WorldPrior& prior, const ProxyChannel& channel) {
    if (channel.n_atoms() != prior.reward_support().size()) {
        throw ChannelPriorMismatch("channel rows do not match prior support");
    }
    std::vector<RewardTable> means = posterior_mean_tables(prior, channel);
    std::map<std::vector<double>, std::size_t> index;
    std::vector<RewardTable> codebook;
    std::vector<std::size_t> remap(means.size());
    for (std::size_t c = 0; c < means.size(); ++c) {
        auto [it, inserted] = index.try_emplace(means[c].values(), codebook.size());
        if (inserted) codebook.push_back(means[c]);
        remap[c] = it->second;
    }
    std::vector<Pmf> rows;
    rows.reserve(channel.n_atoms());
    for (std::size_t i = 0; i < channel.n_atoms(); ++i) {
        std::vector<double> rp(codebook.size(), 0.0);
        for (std::size_t c = 0; c < means.size(); ++c) rp[remap[c]] += channel.row(i)[c];
        rows.push_back(Pmf(std::move(rp)));
    }
    return ProxyChannel(std::move(codebook), std::move(rows));
}

double coherence_residual(const WorldPrior& prior, const ProxyChannel& channel) {
    std::vector<RewardTable> means = posterior_mean_tables(prior, channel);
    double worst = 0.0;
    for (std::size_t c = 0; c < means.size(); ++c) {
        for (std::size_t o = 0; o < means[c].size(); ++o) {
            worst = std::max(worst,
                             std::abs(means[c].value(o) - channel.codeword(c).value(o)));
        }
    }
    return worst;
}

}  // namespace ghl

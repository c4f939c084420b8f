#include "ghl/world.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace ghl {

namespace {

// Convex combinations can overshoot the unit range by a few ulps.
double clamp_unit(double v) {
    if (v > 1.0 && v <= 1.0 + 1e-12) return 1.0;
    if (v < -1.0 && v >= -1.0 - 1e-12) return -1.0;
    return v;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX || p < INT64_MIN) throw GridOverflow("integer overflow in grid arithmetic");
    return static_cast<std::int64_t>(p);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    return checked_mul(a / gcd64(a, b), b);
}

}  // namespace

OutcomePartition::OutcomePartition(std::vector<int> cell_of, int n_cells)
    : cell_of_(std::move(cell_of)), n_cells_(n_cells) {
    if (n_cells_ < 1 || cell_of_.empty()) {
        throw DomainError("partition needs at least one cell and one outcome");
    }
    members_.resize(n_cells_);
    for (std::size_t o = 0; o < cell_of_.size(); ++o) {
        int c = cell_of_[o];
        if (c < 0 || c >= n_cells_) throw DomainError("cell index out of range");
        members_[c].push_back(static_cast<int>(o));
    }
    for (const auto& m : members_) {
        if (m.empty()) throw DomainError("partition has an empty cell");
    }
}

OutcomePartition OutcomePartition::trivial(int n_outcomes) {
    std::vector<int> cell_of(n_outcomes);
    std::iota(cell_of.begin(), cell_of.end(), 0);
    return OutcomePartition(std::move(cell_of), n_outcomes);
}

OutcomePartition OutcomePartition::single_cell(int n_outcomes) {
    return OutcomePartition(std::vector<int>(n_outcomes, 0), 1);
}

FiniteModel::FiniteModel(int n_outcomes, int n_policies, std::vector<EnvMatrix> environments)
    : n_outcomes_(n_outcomes), n_policies_(n_policies), envs_(std::move(environments)) {
    if (n_outcomes_ < 1 || n_policies_ < 1 || envs_.empty()) {
        throw DomainError("model needs at least one outcome, policy and environment");
    }
    for (const auto& env : envs_) {
        if (static_cast<int>(env.size()) != n_policies_) {
            throw DimensionMismatch("environment has wrong policy count");
        }
        for (const auto& row : env) {
            if (static_cast<int>(row.size()) != n_outcomes_) {
                throw DimensionMismatch("environment row has wrong outcome count");
            }
            Pmf check(row);  // throws InvalidPmf
        }
    }
}

namespace {

RewardEnsemble build_product_ensemble(int n_slots, std::span<const std::int64_t> grid_num,
                                      std::int64_t grid_denom, const Pmf& marginal,
                                      std::int64_t cap,
                                      const OutcomePartition* partition) {
    if (grid_num.empty()) throw DomainError("empty value grid");
    if (marginal.size() != grid_num.size()) {
        throw DimensionMismatch("marginal length differs from grid size");
    }
    for (std::int64_t g : grid_num) {
        if (std::abs(g) > grid_denom) {
            throw DomainError("grid value outside [-1, 1]");
        }
    }
    // Zero-probability values are dropped so every emitted atom has mass.
    std::vector<std::int64_t> support;
    std::vector<double> support_p;
    for (std::size_t i = 0; i < grid_num.size(); ++i) {
        if (marginal[i] > 0.0) {
            support.push_back(grid_num[i]);
            support_p.push_back(marginal[i]);
        }
    }
    if (support.empty()) throw InvalidPmf("marginal has no positive mass");

    double combos = std::pow(static_cast<double>(support.size()),
                             static_cast<double>(n_slots));
    if (combos > static_cast<double>(cap)) {
        throw EnsembleTooLarge(std::to_string(support.size()) + "^" +
                               std::to_string(n_slots) + " exceeds cap " +
                               std::to_string(cap));
    }
    const auto total = static_cast<std::int64_t>(combos + 0.5);

    const int n_outcomes = partition ? partition->n_outcomes() : n_slots;
    RewardEnsemble out;
    out.tables.reserve(total);
    out.probs.reserve(total);
    std::vector<std::size_t> digit(n_slots, 0);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::vector<std::int64_t> num(n_outcomes);
        double p = 1.0;
        for (int s = 0; s < n_slots; ++s) {
            p *= support_p[digit[s]];
            if (partition) {
                for (int o : partition->members()[s]) num[o] = support[digit[s]];
            } else {
                num[s] = support[digit[s]];
            }
        }
        out.tables.push_back(RewardTable::from_grid(std::move(num), grid_denom));
        out.probs.push_back(p);
        for (int s = n_slots - 1; s >= 0; --s) {
            if (++digit[s] < support.size()) break;
            digit[s] = 0;
        }
    }
    out.iid = partition == nullptr || partition->is_trivial();
    if (partition) out.cells = *partition;
    out.grid_num.assign(support.begin(), support.end());
    out.grid_denom = grid_denom;
    out.marginal_probs = support_p;
    return out;
}

}  // namespace

RewardEnsemble build_iid_reward_ensemble(int n_outcomes,
                                         std::span<const std::int64_t> grid_num,
                                         std::int64_t grid_denom, const Pmf& marginal,
                                         std::int64_t cap) {
    if (n_outcomes < 1) throw DomainError("need at least one outcome");
    return build_product_ensemble(n_outcomes, grid_num, grid_denom, marginal, cap, nullptr);
}

RewardEnsemble build_cellwise_iid_ensemble(const OutcomePartition& partition,
                                           std::span<const std::int64_t> grid_num,
                                           std::int64_t grid_denom, const Pmf& marginal,
                                           std::int64_t cap) {
    return build_product_ensemble(partition.n_cells(), grid_num, grid_denom, marginal,
                                  cap, &partition);
}

RewardEnsemble explicit_ensemble(std::vector<RewardTable> tables, std::vector<double> probs) {
    if (tables.size() != probs.size() || tables.empty()) {
        throw DimensionMismatch("tables/probs size mismatch");
    }
    RewardEnsemble out;
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (!(probs[i] >= 0.0)) throw InvalidPmf("negative atom probability");
        if (probs[i] == 0.0) continue;
        auto [it, inserted] = seen.try_emplace(tables[i].values(), out.tables.size());
        if (inserted) {
            out.tables.push_back(tables[i]);
            out.probs.push_back(probs[i]);
        } else {
            out.probs[it->second] += probs[i];
        }
    }
    if (out.tables.empty()) throw InvalidPmf("ensemble has no positive-probability atom");
    Pmf check(out.probs);
    return out;
}

WorldPrior::WorldPrior(FiniteModel model, RewardEnsemble ensemble, std::vector<Atom> atoms,
                       std::vector<double> atom_probs, bool independent_coupling)
    : model_(std::move(model)),
      ensemble_(std::move(ensemble)),
      atoms_(std::move(atoms)),
      atom_probs_(std::move(atom_probs)),
      independent_coupling_(independent_coupling) {
    if (atoms_.size() != atom_probs_.size()) {
        throw DimensionMismatch("atom list and probability length differ");
    }
    for (const auto& t : ensemble_.tables) {
        if (static_cast<int>(t.size()) != model_.n_outcomes()) {
            throw DimensionMismatch("reward table size differs from outcome count");
        }
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& a : atoms_) {
        if (a.reward_idx < 0 || a.reward_idx >= static_cast<int>(ensemble_.tables.size()) ||
            a.env_idx < 0 || a.env_idx >= model_.n_envs()) {
            throw DimensionMismatch("atom index out of range");
        }
        if (!seen.emplace(a.reward_idx, a.env_idx).second) {
            throw DimensionMismatch("duplicate (reward, environment) atom");
        }
    }
}

std::vector<double> WorldPrior::reward_marginal() const {
    std::vector<double> m(ensemble_.tables.size(), 0.0);
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        m[atoms_[a].reward_idx] += atom_probs_[a];
    }
    return m;
}

std::vector<double> WorldPrior::env_marginal() const {
    std::vector<double> m(model_.n_envs(), 0.0);
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        m[atoms_[a].env_idx] += atom_probs_[a];
    }
    return m;
}

WorldPrior compose_prior(FiniteModel model, RewardEnsemble ensemble, const Pmf& env_marginal) {
    if (static_cast<int>(env_marginal.size()) != model.n_envs()) {
        throw DimensionMismatch("environment marginal length differs from model");
    }
    std::vector<WorldPrior::Atom> atoms;
    std::vector<double> probs;
    for (std::size_t i = 0; i < ensemble.tables.size(); ++i) {
        for (int e = 0; e < model.n_envs(); ++e) {
            double p = ensemble.probs[i] * env_marginal[e];
            if (p > 0.0) {
                atoms.push_back({static_cast<int>(i), e});
                probs.push_back(p);
            }
        }
    }
    return WorldPrior(std::move(model), std::move(ensemble), std::move(atoms),
                      std::move(probs), true);
}

WorldPrior compose_prior_explicit(FiniteModel model, RewardEnsemble ensemble,
                                  const std::vector<std::vector<double>>& joint) {
    if (joint.size() != ensemble.tables.size()) {
        throw DimensionMismatch("joint rows differ from ensemble size");
    }
    std::vector<WorldPrior::Atom> atoms;
    std::vector<double> probs;
    std::vector<double> reward_mass(ensemble.tables.size(), 0.0);
    for (std::size_t i = 0; i < joint.size(); ++i) {
        if (static_cast<int>(joint[i].size()) != model.n_envs()) {
            throw DimensionMismatch("joint columns differ from environment count");
        }
        for (int e = 0; e < model.n_envs(); ++e) {
            double p = joint[i][e];
            if (!(p >= 0.0)) throw InvalidPmf("negative joint entry");
            reward_mass[i] += p;
            if (p > 0.0) {
                atoms.push_back({static_cast<int>(i), e});
                probs.push_back(p);
            }
        }
    }
    Pmf check(probs);  // throws InvalidPmf unless total mass is 1
    // The ensemble's per-table probabilities must agree with the joint's
    // reward marginal, otherwise exact-iid baselines would be inconsistent.
    for (std::size_t i = 0; i < reward_mass.size(); ++i) {
        if (std::abs(reward_mass[i] - ensemble.probs[i]) > kPmfTolerance) {
            throw DimensionMismatch("joint reward marginal differs from ensemble");
        }
    }
    return WorldPrior(std::move(model), std::move(ensemble), std::move(atoms),
                      std::move(probs), false);
}

bool check_reward_env_independence(const WorldPrior& prior) {
    const auto& model = prior.model();
    // Environments with identical attainable-distribution sets are one group.
    std::map<std::set<std::vector<double>>, int> group_of_set;
    std::vector<int> group(model.n_envs());
    for (int e = 0; e < model.n_envs(); ++e) {
        std::set<std::vector<double>> rows(model.env(e).begin(), model.env(e).end());
        auto [it, inserted] = group_of_set.try_emplace(std::move(rows),
                                                       static_cast<int>(group_of_set.size()));
        group[e] = it->second;
    }
    const std::size_t n_r = prior.reward_support().size();
    const std::size_t n_g = group_of_set.size();
    std::vector<double> joint(n_r * n_g, 0.0);
    std::vector<double> pr(n_r, 0.0), pg(n_g, 0.0);
    const auto& atoms = prior.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        double p = prior.atom_probs()[a];
        int g = group[atoms[a].env_idx];
        joint[atoms[a].reward_idx * n_g + g] += p;
        pr[atoms[a].reward_idx] += p;
        pg[g] += p;
    }
    for (std::size_t i = 0; i < n_r; ++i) {
        for (std::size_t g = 0; g < n_g; ++g) {
            if (std::abs(joint[i * n_g + g] - pr[i] * pg[g]) > 1e-9) return false;
        }
    }
    return true;
}

ProxyChannel::ProxyChannel(std::vector<RewardTable> codebook, std::vector<Pmf> rows,
                           std::optional<NoiseMeta> noise_meta)
    : codebook_(std::move(codebook)), rows_(std::move(rows)), noise_meta_(noise_meta) {
    if (codebook_.empty() || rows_.empty()) {
        throw DimensionMismatch("channel needs codewords and rows");
    }
    const std::size_t n = codebook_.front().size();
    for (const auto& cw : codebook_) {
        if (cw.size() != n) throw DimensionMismatch("codeword sizes differ");
    }
    for (const auto& r : rows_) {
        if (r.size() != codebook_.size()) {
            throw DimensionMismatch("row length differs from codebook size");
        }
    }
}

ProxyChannel make_identity_channel(const WorldPrior& prior) {
    const auto& support = prior.reward_support();
    std::vector<Pmf> rows;
    rows.reserve(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        rows.push_back(Pmf::point_mass(support.size(), i));
    }
    return ProxyChannel(support, std::move(rows));
}

// Equal weights over on-grid tables keep the result exact; otherwise the
// mean is stored off-grid at full precision.
RewardTable mixture_mean_table(const std::vector<RewardTable>& tables,
                               std::span<const std::size_t> idx,
                               std::span<const double> weights) {
    bool equal = true;
    bool all_grid = true;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (weights[j] != weights[0]) equal = false;
        if (!tables[idx[j]].on_grid()) all_grid = false;
    }
    if (equal && all_grid) {
        std::vector<RewardTable> members;
        members.reserve(idx.size());
        for (std::size_t j : idx) members.push_back(tables[j]);
        return exact_mean(members);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) total += weights[j];
    const std::size_t n = tables[idx[0]].size();
    std::vector<double> mean(n, 0.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
        for (std::size_t o = 0; o < n; ++o) {
            mean[o] += weights[j] / total * tables[idx[j]].value(o);
        }
    }
    for (auto& v : mean) v = clamp_unit(v);
    return RewardTable::off_grid(std::move(mean));
}

ProxyChannel make_quantizer_channel(const WorldPrior& prior, int k_bits) {
    if (k_bits < 0) throw DomainError("k_bits must be nonnegative");
    const auto& support = prior.reward_support();
    const auto n_atoms = support.size();
    std::vector<std::size_t> order(n_atoms);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return support[a].lex_less(support[b]);
    });

    std::size_t n_buckets = n_atoms;
    if (k_bits < 63) n_buckets = std::min<std::size_t>(n_atoms, std::size_t{1} << k_bits);

    const std::vector<double> reward_p = prior.reward_marginal();
    const std::size_t base = n_atoms / n_buckets;
    const std::size_t extra = n_atoms % n_buckets;

    std::map<std::vector<double>, std::size_t> codeword_index;
    std::vector<RewardTable> codebook;
    std::vector<std::size_t> bucket_codeword(n_buckets);
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < n_buckets; ++b) {
        const std::size_t count = base + (b < extra ? 1 : 0);
        std::vector<std::size_t> members(order.begin() + cursor,
                                         order.begin() + cursor + count);
        cursor += count;
        std::vector<double> weights;
        weights.reserve(count);
        for (std::size_t m : members) weights.push_back(reward_p[m]);
        RewardTable mean = mixture_mean_table(support, members, weights);
        auto [it, inserted] = codeword_index.try_emplace(mean.values(), codebook.size());
        if (inserted) codebook.push_back(std::move(mean));
        bucket_codeword[b] = it->second;
    }

    std::vector<std::size_t> atom_bucket(n_atoms);
    cursor = 0;
    for (std::size_t b = 0; b < n_buckets; ++b) {
        const std::size_t count = base + (b < extra ? 1 : 0);
        for (std::size_t j = 0; j < count; ++j) atom_bucket[order[cursor + j]] = b;
        cursor += count;
    }
    std::vector<Pmf> rows;
    rows.reserve(n_atoms);
    for (std::size_t i = 0; i < n_atoms; ++i) {
        rows.push_back(Pmf::point_mass(codebook.size(), bucket_codeword[atom_bucket[i]]));
    }
    return ProxyChannel(std::move(codebook), std::move(rows));
}

NoiseLaw NoiseLaw::zero(int n_outcomes) {
    NoiseLaw law;
    law.vectors = {std::vector<std::int64_t>(n_outcomes, 0)};
    law.probs = {1.0};
    return law;
}

namespace {

void validate_noise_law(const NoiseLaw& law, int n_outcomes, const char* name) {
    if (law.vectors.empty() || law.vectors.size() != law.probs.size()) {
        throw DimensionMismatch(std::string(name) + " law shape mismatch");
    }
    if (law.denom <= 0) throw DomainError("noise law denominator must be positive");
    Pmf check(law.probs);
    for (const auto& v : law.vectors) {
        if (static_cast<int>(v.size()) != n_outcomes) {
            throw DimensionMismatch(std::string(name) + " vector length mismatch");
        }
    }
    for (int o = 0; o < n_outcomes; ++o) {
        double mean = 0.0;
        for (std::size_t j = 0; j < law.vectors.size(); ++j) {
            mean += law.probs[j] *
                    (static_cast<double>(law.vectors[j][o]) / static_cast<double>(law.denom));
        }
        if (std::abs(mean) > 1e-12) {
            throw NoiseNotCentered(std::string(name) + " mean at outcome " +
                                   std::to_string(o) + " is " + std::to_string(mean));
        }
    }
}

}  // namespace

ProxyChannel make_noise_channel(const WorldPrior& prior, GridScalar k_scale,
                                GridScalar m_shift, const NoiseLaw& w_law,
                                const NoiseLaw& v_law) {
    const int n = prior.model().n_outcomes();
    if (k_scale.num <= 0 || k_scale.denom <= 0) {
        throw DomainError("k_scale must be positive");
    }
    if (m_shift.denom <= 0) throw DomainError("m_shift denominator must be positive");
    validate_noise_law(w_law, n, "w");
    validate_noise_law(v_law, n, "v");

    const auto& support = prior.reward_support();
    std::map<std::vector<double>, std::size_t> codeword_index;
    std::vector<RewardTable> codebook;
    std::vector<std::map<std::size_t, double>> row_mass(support.size());

    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto& r = support[i];
        if (!r.on_grid()) throw DomainError("noise channel needs on-grid support tables");
        for (std::size_t a = 0; a < w_law.vectors.size(); ++a) {
            for (std::size_t b = 0; b < v_law.vectors.size(); ++b) {
                // value(o) = k*r(o) + w(o) + v(o)*r(o) + m on a common denominator
                std::int64_t common = lcm64(checked_mul(k_scale.denom, r.denom()), w_law.denom);
                common = lcm64(common, checked_mul(v_law.denom, r.denom()));
                common = lcm64(common, m_shift.denom);
                std::vector<std::int64_t> num(n);
                for (int o = 0; o < n; ++o) {
                    std::int64_t kr = checked_mul(
                        checked_mul(k_scale.num, r.num()[o]),
                        common / (k_scale.denom * r.denom()));
                    std::int64_t w = checked_mul(w_law.vectors[a][o], common / w_law.denom);
                    std::int64_t vr = checked_mul(
                        checked_mul(v_law.vectors[b][o], r.num()[o]),
                        common / (v_law.denom * r.denom()));
                    std::int64_t m = checked_mul(m_shift.num, common / m_shift.denom);
                    num[o] = kr + w + vr + m;
                }
                RewardTable table = RewardTable::from_grid(std::move(num), common);
                auto [it, inserted] = codeword_index.try_emplace(table.values(), codebook.size());
                if (inserted) codebook.push_back(std::move(table));
                row_mass[i][it->second] += w_law.probs[a] * v_law.probs[b];
            }
        }
    }

    std::vector<Pmf> rows;
    rows.reserve(row_mass.size());
    for (const auto& mass : row_mass) {
        std::vector<double> rp(codebook.size(), 0.0);
        for (auto [c, p] : mass) rp[c] = p;
        rows.push_back(Pmf(std::move(rp)));
    }
    return ProxyChannel(std::move(codebook), std::move(rows),
                        NoiseMeta{k_scale, m_shift});
}

JointPmf joint_reward_proxy(const WorldPrior& prior, const ProxyChannel& channel) {
    const auto reward_p = prior.reward_marginal();
    if (channel.n_atoms() != reward_p.size()) {
        throw ChannelPriorMismatch("channel rows do not match prior support");
    }
    if (!channel.codebook().empty() &&
        static_cast<int>(channel.codeword(0).size()) != prior.model().n_outcomes()) {
        throw ChannelPriorMismatch("codeword size does not match outcome count");
    }
    const std::size_t n_c = channel.n_codewords();
    std::vector<double> table(reward_p.size() * n_c, 0.0);
    for (std::size_t i = 0; i < reward_p.size(); ++i) {
        for (std::size_t c = 0; c < n_c; ++c) {
            table[i * n_c + c] = reward_p[i] * channel.row(i)[c];
        }
    }
    return JointPmf(reward_p.size(), n_c, std::move(table));
}

}  // namespace ghl

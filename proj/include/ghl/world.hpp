#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ghl/grid.hpp"
#include "ghl/prob.hpp"

namespace ghl {

inline constexpr std::int64_t kDefaultEnsembleCap = 100000;

// Partition of the outcome set into nonempty cells.
class OutcomePartition {
public:
    OutcomePartition(std::vector<int> cell_of, int n_cells);

    static OutcomePartition trivial(int n_outcomes);
    static OutcomePartition single_cell(int n_outcomes);

    int n_outcomes() const { return static_cast<int>(cell_of_.size()); }
    int n_cells() const { return n_cells_; }
    int cell_of(int outcome) const { return cell_of_[outcome]; }
    const std::vector<std::vector<int>>& members() const { return members_; }
    bool is_trivial() const { return n_cells_ == n_outcomes(); }

    bool operator==(const OutcomePartition& other) const {
        return cell_of_ == other.cell_of_;
    }

private:
    std::vector<int> cell_of_;
    int n_cells_;
    std::vector<std::vector<int>> members_;
};

// Finite world: outcome and policy index sets plus a list of environments,
// each a stochastic matrix of outcome distributions, one row per policy.
class FiniteModel {
public:
    using EnvMatrix = std::vector<std::vector<double>>;

    FiniteModel(int n_outcomes, int n_policies, std::vector<EnvMatrix> environments);

    int n_outcomes() const { return n_outcomes_; }
    int n_policies() const { return n_policies_; }
    int n_envs() const { return static_cast<int>(envs_.size()); }
    const EnvMatrix& env(int e) const { return envs_[e]; }
    const std::vector<double>& row(int e, int pi) const { return envs_[e][pi]; }
    const std::vector<EnvMatrix>& environments() const { return envs_; }

private:
    int n_outcomes_, n_policies_;
    std::vector<EnvMatrix> envs_;
};

// Explicit finite ensemble of reward tables. Built by one of the iid
// constructors (which record the value marginal for exact baselines) or
// assembled from explicit tables.
struct RewardEnsemble {
    std::vector<RewardTable> tables;  // pairwise distinct
    std::vector<double> probs;        // strictly positive, sums to 1
    bool iid = false;
    std::optional<OutcomePartition> cells;
    std::vector<std::int64_t> grid_num;  // value marginal support, when iid/cellwise
    std::int64_t grid_denom = kDefaultGridDenom;
    std::vector<double> marginal_probs;
};

RewardEnsemble build_iid_reward_ensemble(int n_outcomes,
                                         std::span<const std::int64_t> grid_num,
                                         std::int64_t grid_denom, const Pmf& marginal,
                                         std::int64_t cap = kDefaultEnsembleCap);

RewardEnsemble build_cellwise_iid_ensemble(const OutcomePartition& partition,
                                           std::span<const std::int64_t> grid_num,
                                           std::int64_t grid_denom, const Pmf& marginal,
                                           std::int64_t cap = kDefaultEnsembleCap);

// Arbitrary ensemble; duplicate tables are merged, zero-probability atoms dropped.
RewardEnsemble explicit_ensemble(std::vector<RewardTable> tables, std::vector<double> probs);

// Joint prior over (reward table, environment).
class WorldPrior {
public:
    struct Atom {
        int reward_idx;
        int env_idx;
        bool operator==(const Atom&) const = default;
    };

    WorldPrior(FiniteModel model, RewardEnsemble ensemble, std::vector<Atom> atoms,
               std::vector<double> atom_probs, bool independent_coupling);

    const FiniteModel& model() const { return model_; }
    const RewardEnsemble& ensemble() const { return ensemble_; }
    const std::vector<RewardTable>& reward_support() const { return ensemble_.tables; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const Pmf& atom_probs() const { return atom_probs_; }

    bool iid_rewards() const { return ensemble_.iid; }
    bool cellwise() const { return ensemble_.cells.has_value(); }
    const OutcomePartition* cells() const {
        return ensemble_.cells ? &*ensemble_.cells : nullptr;
    }
    bool independent_coupling() const { return independent_coupling_; }

    std::vector<double> reward_marginal() const;
    std::vector<double> env_marginal() const;

private:
    FiniteModel model_;
    RewardEnsemble ensemble_;
    std::vector<Atom> atoms_;
    Pmf atom_probs_;
    bool independent_coupling_;
};

WorldPrior compose_prior(FiniteModel model, RewardEnsemble ensemble, const Pmf& env_marginal);

// Explicit coupling: joint[i][e] = P(reward table i, environment e).
WorldPrior compose_prior_explicit(FiniteModel model, RewardEnsemble ensemble,
                                  const std::vector<std::vector<double>>& joint);

// Tests whether the reward table is independent of the attainable-distribution
// set: environments are grouped by exact row-set equality and the joint over
// (reward, group) must factorize within 1e-9.
bool check_reward_env_independence(const WorldPrior& prior);

struct GridScalar {
    std::int64_t num;
    std::int64_t denom;
    double value() const { return static_cast<double>(num) / static_cast<double>(denom); }
};

struct NoiseMeta {
    GridScalar k_scale;
    GridScalar m_shift;
};

// Conditional law of the proxy table given the realized reward table. Rows
// are indexed by reward-support atom only, which structurally enforces that
// the proxy is independent of the environment given the true reward.
class ProxyChannel {
public:
    ProxyChannel(std::vector<RewardTable> codebook, std::vector<Pmf> rows,
                 std::optional<NoiseMeta> noise_meta = std::nullopt);

    std::size_t n_codewords() const { return codebook_.size(); }
    std::size_t n_atoms() const { return rows_.size(); }
    const RewardTable& codeword(std::size_t c) const { return codebook_[c]; }
    const std::vector<RewardTable>& codebook() const { return codebook_; }
    const Pmf& row(std::size_t i) const { return rows_[i]; }
    const std::vector<Pmf>& rows() const { return rows_; }
    const std::optional<NoiseMeta>& noise_meta() const { return noise_meta_; }

private:
    std::vector<RewardTable> codebook_;
    std::vector<Pmf> rows_;
    std::optional<NoiseMeta> noise_meta_;
};

// One-hot channel revealing the reward table itself.
ProxyChannel make_identity_channel(const WorldPrior& prior);

// Deterministic quantizer: reward tables are sorted lexicographically, split
// into at most 2^k contiguous near-equal-count buckets, and each bucket maps
// to its probability-weighted mean table.
ProxyChannel make_quantizer_channel(const WorldPrior& prior, int k_bits);

// Law of a noise vector over outcomes, on an exact grid.
struct NoiseLaw {
    std::vector<std::vector<std::int64_t>> vectors;  // each of length n_outcomes
    std::int64_t denom = kDefaultGridDenom;
    std::vector<double> probs;

    static NoiseLaw zero(int n_outcomes);
};

// Proxy = k*r + w + v.*r + m with (w, v) drawn independently of the reward
// atom from componentwise zero-mean laws. All arithmetic is exact on the grid.
ProxyChannel make_noise_channel(const WorldPrior& prior, GridScalar k_scale,
                                GridScalar m_shift, const NoiseLaw& w_law,
                                const NoiseLaw& v_law);

// Joint law over (reward-support index, codeword index).
JointPmf joint_reward_proxy(const WorldPrior& prior, const ProxyChannel& channel);

// Weighted mean of tables[idx] under the given (unnormalized) weights.
// Equal weights over on-grid tables keep the result on the exact grid.
RewardTable mixture_mean_table(const std::vector<RewardTable>& tables,
                               std::span<const std::size_t> idx,
                               std::span<const double> weights);

}  // namespace ghl

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghl/agent.hpp"
#include "ghl/valuation.hpp"
#include "ghl/world.hpp"

namespace ghl {

inline constexpr double kMarginTolerance = 1e-9;

struct Precondition {
    std::string name;
    bool holds;
};

// Machine-checked inequality instance. A report passes when either a
// precondition fails (vacuous) or margin = lhs - rhs >= -1e-9; an infinite
// lhs beats any finite rhs.
struct VerificationReport {
    std::string theorem;
    std::vector<Precondition> preconditions;
    ExtReal lhs{0.0};
    ExtReal rhs{0.0};
    ExtReal margin{0.0};
    bool applicable = false;
    bool pass = false;
    std::map<std::string, double> context;
    std::string digest;

    unsigned precondition_mask() const;
};

// Information lower bound: kl(Bern(v_dagger) || Bern(v_bar + sigma_bar/2))
// divided by the attainability supremum.
ExtReal thm1_rhs(double v_dagger, double v_bar, double sigma_bar, double p_att_sup);

VerificationReport verify_thm1(const WorldPrior& prior, const ProxyChannel& channel,
                               double v_dagger);

VerificationReport verify_thm2(const WorldPrior& prior, const OutcomePartition& partition,
                               const ProxyChannel& channel, double v_dagger);

struct SafeSetDemoResult {
    int n_outcomes = 0;
    double safe_prob = 0.0;
    double v_dagger = 0.0;
    double epsilon = 0.0;
    double empty_set_prob = 0.0;        // mass conditioned away
    double mi_bits = 0.0;               // exact I(safety pattern; safe outcome)
    double expected_log_ratio_bits = 0.0;
    double identity_residual = 0.0;
    double kl_factor_bits = 0.0;
    double approx_bits = 0.0;           // v_dagger * log2(1/epsilon)
    double approximation_gap = 0.0;
};

// Exact check of the safe-set information identity under iid safety
// indicators and a uniformly drawn safe outcome (conditioned nonempty).
SafeSetDemoResult safe_set_demo(int n_outcomes, double safe_prob, double v_dagger,
                                double epsilon);

struct FrontloadingResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// Capped weights against a nonincreasing sequence: sum w_t a_t is at most
// the frontloaded expectation with T = floor(1/q).
FrontloadingResult check_frontloading(std::span<const double> weights,
                                      std::span<const double> a, double q);

struct KlDecompositionResult {
    ExtReal direct{0.0};
    ExtReal decomposed{0.0};
    bool pass = false;
};

// x_table: joint law over T coordinates (row-major for `shape`); the
// reference law is the product of y_marginals.
KlDecompositionResult check_kl_decomposition(const std::vector<double>& x_table,
                                             const std::vector<std::size_t>& shape,
                                             const std::vector<Pmf>& y_marginals);

struct PositivePartResult {
    double e_positive = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double bound_general = 0.0;             // (mu + sqrt(mu^2 + sigma^2)) / 2
    std::optional<double> bound_simplified; // mu + sigma/2, when mu >= 0
    bool pass = false;
};

PositivePartResult check_positive_part_bounds(std::span<const double> values,
                                              const Pmf& probs);

struct DominatingPerformanceResult {
    double executed = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Frontloaded upper bound on executed value for coherent channels over
// iid, environment-independent priors.
DominatingPerformanceResult check_dominating_performance(const WorldPrior& prior,
                                                         const ProxyChannel& channel);

struct CurvePoint {
    double lambda = 0.0;
    double value = 0.0;
    double v0 = 0.0;
    double v_bar = 0.0;
    double v_bar_plus_half_sigma = 0.0;
    double mi_bits = 0.0;
};

// Value of the softly constrained agent across optimization pressures.
std::vector<CurvePoint> value_curve(const WorldPrior& prior, const ProxyChannel& channel,
                                    const Pmf& base, std::span<const double> lambdas);

// Single curve point; accepts any real lambda (used by finite differences).
double regularized_value(const WorldPrior& prior, const ProxyChannel& channel,
                         const Pmf& base, double lambda);

struct DerivativeCheckResult {
    double closed_form = 0.0;
    double finite_difference = 0.0;
    bool pass = false;
};

// Slope of the value curve at zero pressure for independent-noise channels:
// closed form k * E[Var_{pi~base}(policy value)] against a central difference.
DerivativeCheckResult derivative_check(const WorldPrior& prior, const ProxyChannel& channel,
                                       const Pmf& base, double step = 1e-4);

// True when some positive-probability atom gives unequal values to two
// optimal uninformed policies (strictness at 1e-12).
bool uninformed_policy_variation(const WorldPrior& prior);

struct GoldilocksSearchSpec {
    double k_bits = 1.0;
    std::vector<GridScalar> eta_grid;
    std::vector<double> lambda_grid;
    std::vector<int> width_factors{1, 2, 4, 8};
    std::int64_t pattern_cap = 8192;
};

GoldilocksSearchSpec default_goldilocks_spec(double k_bits);

struct GoldilocksSearchResult {
    bool applicable = false;
    bool found = false;
    GridScalar eta{0, 1};
    int width_factor = 0;  // 0 = no noise (identity-like channel)
    double lambda = 0.0;
    double mi_bits = 0.0;
    double v_lambda = -1.0;
    double v0 = 0.0;
};

// Sweeps scaled independent-noise channels, keeps those within the
// information budget, and maximizes the regularized value over the
// pressure grid with the uniform-over-optimal-uninformed base.
GoldilocksSearchResult goldilocks_search(const WorldPrior& prior,
                                         const GoldilocksSearchSpec& spec);

struct FixedLengthResult {
    int k_bits = 0;
    double mi_bits = 0.0;
    bool pass = false;
};

FixedLengthResult check_fixed_length_protocol(const WorldPrior& prior, int k_bits);

struct VariableLengthResult {
    double expected_length = 0.0;
    double mi_bits = 0.0;
    double rhs_bits = 0.0;
    bool pass = false;
};

// One-to-one code over the reward support, identity decoding. The encoding
// lower bound E|M| >= I - log2(I+1) - log2(e) is taken as ground truth.
VariableLengthResult check_variable_length_protocol(const WorldPrior& prior,
                                                    const std::vector<std::string>& codes);

// Stable digest of a prior/channel pair for report context.
std::string instance_digest(const WorldPrior& prior, const ProxyChannel* channel);

}  // namespace ghl

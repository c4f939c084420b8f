#include <cmath>

#include <doctest.h>

#include "ghl/harness.hpp"
#include "ghl/valuation.hpp"
#include "test_util.hpp"

using namespace ghl;
using ghl::testutil::binary_identity_prior;
using ghl::testutil::identity_model;

namespace {

const std::int64_t kBinary[] = {0, 1000};

// Brute-force oracle: expected max / min of n iid fair bits.
double expected_extreme_bits(int n, bool maximum) {
    double total = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        int best = maximum ? 0 : 1;
        for (int o = 0; o < n; ++o) {
            int bit = (mask >> o) & 1;
            best = maximum ? std::max(best, bit) : std::min(best, bit);
        }
        total += static_cast<double>(best) / (1 << n);
    }
    return total;
}

}  // namespace

TEST_CASE("executed value examples") {
    WorldPrior prior = binary_identity_prior(2);
    CHECK(executed_value(prior, make_identity_channel(prior)) ==
          doctest::Approx(expected_extreme_bits(2, true)).epsilon(1e-12));
    CHECK(executed_value(prior, make_identity_channel(prior)) ==
          doctest::Approx(0.75).epsilon(1e-12));

    // constant proxy: selection is reward-independent, value is the mean
    CHECK(executed_value(prior, make_quantizer_channel(prior, 0)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // single-outcome world: any channel returns the prior mean
    RewardEnsemble one = build_iid_reward_ensemble(1, kBinary, 1000, Pmf({0.3, 0.7}));
    WorldPrior single = compose_prior(FiniteModel(1, 1, {{{1.0}}}), one, Pmf::uniform(1));
    CHECK(executed_value(single, make_identity_channel(single)) ==
          doctest::Approx(0.7).epsilon(1e-12));
    CHECK(executed_value(single, make_quantizer_channel(single, 0)) ==
          doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("contemporary value examples") {
    // iid rewards: every policy earns the marginal mean
    WorldPrior prior = binary_identity_prior(3);
    CHECK(contemporary_value(prior) == doctest::Approx(0.5).epsilon(1e-12));

    // point prior: best single policy
    RewardEnsemble point =
        explicit_ensemble({RewardTable::from_grid({200, 600}, 1000)}, {1.0});
    WorldPrior pt = compose_prior(identity_model(2), point, Pmf::uniform(1));
    CHECK(contemporary_value(pt) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("primordial quantities, exact mode") {
    WorldPrior prior = binary_identity_prior(2);
    BaselineReport rep = primordial_quantities(prior, PrimordialMode::exact_iid);
    CHECK(rep.primordial_value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.primordial_variance == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.primordial_positive_value == doctest::Approx(0.5).epsilon(1e-12));

    const std::int64_t kSigned[] = {-1000, 1000};
    RewardEnsemble sym = build_iid_reward_ensemble(2, kSigned, 1000, Pmf({0.5, 0.5}));
    WorldPrior signed_prior = compose_prior(identity_model(2), sym, Pmf::uniform(1));
    BaselineReport rep2 = primordial_quantities(signed_prior, PrimordialMode::exact_iid);
    CHECK(rep2.primordial_value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep2.primordial_variance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep2.primordial_positive_value == doctest::Approx(0.5).epsilon(1e-12));
    // equality case of the positive-part bound: mean + sd/2 = 0.5
    CHECK(rep2.primordial_positive_value ==
          doctest::Approx(rep2.primordial_value +
                          std::sqrt(rep2.primordial_variance) / 2.0));

    // exact mode rejected without the iid structure
    RewardEnsemble expl =
        explicit_ensemble({RewardTable::from_grid({100, 300}, 1000)}, {1.0});
    WorldPrior nope = compose_prior(identity_model(2), expl, Pmf::uniform(1));
    CHECK_THROWS_AS(primordial_quantities(nope, PrimordialMode::exact_iid),
                    ModeUnsupported);
}

TEST_CASE("primordial quantities, grid-search mode") {
    // single reward atom that is itself a sign table: the search recovers it
    RewardEnsemble point =
        explicit_ensemble({RewardTable::from_grid({1000, -1000}, 1000)}, {1.0});
    WorldPrior prior = compose_prior(identity_model(2), point, Pmf::uniform(1));
    BaselineReport rep = primordial_quantities(prior, PrimordialMode::grid_search);
    CHECK(rep.search_mode == PrimordialMode::grid_search);
    CHECK(rep.primordial_value == doctest::Approx(1.0).epsilon(1e-12));

    // grid-search lower-bounds the exact value on iid instances
    WorldPrior iid = binary_identity_prior(3);
    BaselineReport exact = primordial_quantities(iid, PrimordialMode::exact_iid);
    BaselineReport search = primordial_quantities(iid, PrimordialMode::grid_search);
    CHECK(search.primordial_value <= exact.primordial_value + 1e-9);
}

TEST_CASE("adversarial value examples") {
    WorldPrior prior = binary_identity_prior(2);
    CHECK(adversarial_value(prior) ==
          doctest::Approx(expected_extreme_bits(2, false)).epsilon(1e-12));
    CHECK(adversarial_value(prior) == doctest::Approx(0.25).epsilon(1e-12));

    RewardEnsemble constant =
        explicit_ensemble({RewardTable::from_grid({400, 400}, 1000)}, {1.0});
    WorldPrior flat = compose_prior(identity_model(2), constant, Pmf::uniform(1));
    CHECK(adversarial_value(flat) == doctest::Approx(0.4).epsilon(1e-12));

    // single policy: no choice, adversarial equals contemporary
    FiniteModel single_policy(2, 1, {{{0.5, 0.5}}});
    RewardEnsemble e = build_iid_reward_ensemble(2, kBinary, 1000, Pmf({0.5, 0.5}));
    WorldPrior sp = compose_prior(single_policy, e, Pmf::uniform(1));
    CHECK(adversarial_value(sp) == doctest::Approx(contemporary_value(sp)).epsilon(1e-12));
}

TEST_CASE("attainability examples") {
    WorldPrior ident = binary_identity_prior(3);
    AttainabilityProfile prof = attainability_profile(ident);
    for (double p : prof.per_outcome) CHECK(p == doctest::Approx(1.0));
    CHECK(prof.sup_outcome == doctest::Approx(1.0));

    FiniteModel uniform_rows(4, 2, {{std::vector<double>(4, 0.25),
                                     std::vector<double>(4, 0.25)}});
    RewardEnsemble e = build_iid_reward_ensemble(4, kBinary, 1000, Pmf({0.5, 0.5}));
    WorldPrior u = compose_prior(uniform_rows, e, Pmf::uniform(1));
    AttainabilityProfile prof2 = attainability_profile(u);
    for (double p : prof2.per_outcome) CHECK(p == doctest::Approx(0.25));

    // two equiprobable environments: alpha = 1 and 0.5 at outcome 0
    FiniteModel two_envs(2, 1, {{{1.0, 0.0}}, {{0.5, 0.5}}});
    RewardEnsemble e2 = build_iid_reward_ensemble(2, kBinary, 1000, Pmf({0.5, 0.5}));
    WorldPrior tp = compose_prior(two_envs, e2, Pmf({0.5, 0.5}));
    AttainabilityProfile prof3 = attainability_profile(tp);
    CHECK(prof3.per_outcome[0] == doctest::Approx(0.75).epsilon(1e-12));

    // whole space in one cell: mass one
    OutcomePartition whole = OutcomePartition::single_cell(2);
    AttainabilityProfile prof4 = attainability_profile(tp, &whole);
    REQUIRE(prof4.per_cell.has_value());
    CHECK((*prof4.per_cell)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*prof4.sup_cell >= prof4.sup_outcome);
}

TEST_CASE("identity channel dominates every other channel") {
    SizesSpec sizes;
    for (int rep = 0; rep < 20; ++rep) {
        auto inst =
            gen_thm1_instance(1200 + rep, rep, sizes, ChannelMenuSpec{true, {0, 1, 2}, 1});
        DistributionCatalog cat(inst.prior.model());
        double best = executed_value(inst.prior, make_identity_channel(inst.prior), cat);
        for (const auto& [name, channel] : inst.channels) {
            CHECK(executed_value(inst.prior, channel, cat) <= best + 1e-9);
        }
    }
}

TEST_CASE("coherent projection never lowers executed value on independent priors") {
    SizesSpec sizes;
    for (int rep = 0; rep < 20; ++rep) {
        auto inst =
            gen_thm1_instance(1300 + rep, rep, sizes, ChannelMenuSpec{true, {0, 1}, 1});
        DistributionCatalog cat(inst.prior.model());
        for (const auto& [name, channel] : inst.channels) {
            double before = executed_value(inst.prior, channel, cat);
            double after =
                executed_value(inst.prior, coherent_projection(inst.prior, channel), cat);
            CHECK(after >= before - 1e-9);
        }
    }
}

TEST_CASE("iid priors: contemporary equals primordial, adversarial below identity") {
    SizesSpec sizes;
    for (int rep = 0; rep < 20; ++rep) {
        auto inst = gen_thm1_instance(1400 + rep, rep, sizes, ChannelMenuSpec{false, {}, 0});
        BaselineReport b = baseline_report(inst.prior, PrimordialMode::exact_iid);
        CHECK(std::abs(b.contemporary_value - b.primordial_value) <= 1e-9);
        CHECK(b.adversarial_value <=
              executed_value(inst.prior, make_identity_channel(inst.prior)) + 1e-9);
        CHECK(b.adversarial_value <= b.primordial_value + 1e-9);
        // positive-part bound whenever the mean is nonnegative
        if (b.primordial_value >= 0.0) {
            CHECK(b.primordial_positive_value <=
                  b.primordial_value + std::sqrt(b.primordial_variance) / 2.0 + 1e-9);
        }
    }
}

TEST_CASE("cell attainability dominates outcome attainability") {
    SizesSpec sizes;
    sizes.n_outcomes = 6;
    sizes.n_cells = 3;
    for (int rep = 0; rep < 20; ++rep) {
        auto inst = gen_thm2_instance(1500 + rep, rep, sizes, ChannelMenuSpec{false, {}, 0});
        AttainabilityProfile prof = attainability_profile(inst.prior, &inst.partition);
        REQUIRE(prof.sup_cell.has_value());
        CHECK(*prof.sup_cell >= prof.sup_outcome - 1e-12);
    }
    // deterministic environments with constant attainability inside cells:
    // the two suprema coincide
    FiniteModel det(4, 4, {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    OutcomePartition cells({0, 0, 1, 1}, 2);
    const std::int64_t kSigned[] = {-1000, 1000};
    RewardEnsemble e = build_cellwise_iid_ensemble(cells, kSigned, 1000, Pmf({0.5, 0.5}));
    WorldPrior prior = compose_prior(det, e, Pmf::uniform(1));
    AttainabilityProfile prof = attainability_profile(prior, &cells);
    CHECK(*prof.sup_cell == doctest::Approx(prof.sup_outcome));
}

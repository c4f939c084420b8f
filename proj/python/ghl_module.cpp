#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ghl/harness.hpp"
#include "ghl/serialize.hpp"
#include "ghl/theorems.hpp"

namespace py = pybind11;
using namespace ghl;

namespace {

Pmf as_pmf(const std::vector<double>& probs) { return Pmf(probs); }

JointPmf as_joint(const std::vector<std::vector<double>>& table) {
    if (table.empty()) throw InvalidPmf("empty joint table");
    std::size_t ny = table.front().size();
    std::vector<double> flat;
    flat.reserve(table.size() * ny);
    for (const auto& row : table) {
        if (row.size() != ny) throw DimensionMismatch("ragged joint table");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return JointPmf(table.size(), ny, std::move(flat));
}

py::dict report_dict(const VerificationReport& report) {
    py::dict d;
    d["theorem"] = report.theorem;
    py::dict pre;
    for (const auto& p : report.preconditions) pre[py::str(p.name)] = p.holds;
    d["preconditions"] = pre;
    d["lhs"] = report.lhs.as_double();
    d["rhs"] = report.rhs.as_double();
    d["margin"] = report.margin.as_double();
    d["applicable"] = report.applicable;
    d["pass"] = report.pass;
    d["context"] = report.context;
    d["digest"] = report.digest;
    return d;
}

GridScalar as_scalar(std::pair<std::int64_t, std::int64_t> frac) {
    return GridScalar{frac.first, frac.second};
}

}  // namespace

PYBIND11_MODULE(ghl, m) {
    m.doc() = "Exact finite-instance checks of reward-misspecification bounds";

    py::register_exception<Error>(m, "Error");

    // probability kernels
    m.def("entropy_bits", [](const std::vector<double>& p) {
        return entropy_bits(as_pmf(p));
    });
    m.def("kl_divergence_bits", [](const std::vector<double>& p,
                                   const std::vector<double>& q) {
        return kl_divergence_bits(as_pmf(p), as_pmf(q)).as_double();
    });
    m.def("kl_bernoulli_bits", [](double p, double q) {
        return kl_bernoulli_bits(p, q).as_double();
    });
    m.def("mutual_information_bits", [](const std::vector<std::vector<double>>& joint) {
        return mutual_information_bits(as_joint(joint));
    });
    m.def("conditional_mean", [](const std::vector<std::vector<double>>& joint,
                                 const std::vector<double>& values) {
        return conditional_mean(as_joint(joint), values);
    });

    // world model
    py::class_<RewardTable>(m, "RewardTable")
        .def_static("from_grid", &RewardTable::from_grid)
        .def_static("off_grid", &RewardTable::off_grid)
        .def_property_readonly("values",
                               [](const RewardTable& t) { return t.values(); })
        .def_property_readonly("on_grid", &RewardTable::on_grid)
        .def("__eq__", [](const RewardTable& a, const RewardTable& b) { return a == b; })
        .def("__len__", &RewardTable::size);

    py::class_<OutcomePartition>(m, "OutcomePartition")
        .def(py::init<std::vector<int>, int>())
        .def_static("trivial", &OutcomePartition::trivial)
        .def_static("single_cell", &OutcomePartition::single_cell)
        .def_property_readonly("n_cells", &OutcomePartition::n_cells)
        .def_property_readonly("n_outcomes", &OutcomePartition::n_outcomes);

    py::class_<FiniteModel>(m, "FiniteModel")
        .def(py::init<int, int, std::vector<FiniteModel::EnvMatrix>>())
        .def_property_readonly("n_outcomes", &FiniteModel::n_outcomes)
        .def_property_readonly("n_policies", &FiniteModel::n_policies)
        .def_property_readonly("n_envs", &FiniteModel::n_envs)
        .def_property_readonly("environments", &FiniteModel::environments);

    py::class_<RewardEnsemble>(m, "RewardEnsemble")
        .def_readonly("tables", &RewardEnsemble::tables)
        .def_readonly("probs", &RewardEnsemble::probs)
        .def_readonly("iid", &RewardEnsemble::iid);

    m.def("build_iid_reward_ensemble",
          [](int n_outcomes, const std::vector<std::int64_t>& grid_num,
             std::int64_t grid_denom, const std::vector<double>& marginal) {
              return build_iid_reward_ensemble(n_outcomes, grid_num, grid_denom,
                                               as_pmf(marginal));
          });
    m.def("build_cellwise_iid_ensemble",
          [](const OutcomePartition& partition, const std::vector<std::int64_t>& grid_num,
             std::int64_t grid_denom, const std::vector<double>& marginal) {
              return build_cellwise_iid_ensemble(partition, grid_num, grid_denom,
                                                 as_pmf(marginal));
          });
    m.def("explicit_ensemble", &explicit_ensemble);

    py::class_<WorldPrior>(m, "WorldPrior")
        .def_property_readonly("iid_rewards", &WorldPrior::iid_rewards)
        .def_property_readonly("cellwise", &WorldPrior::cellwise)
        .def_property_readonly("reward_support", &WorldPrior::reward_support)
        .def_property_readonly("reward_marginal", &WorldPrior::reward_marginal)
        .def_property_readonly("model", &WorldPrior::model);

    m.def("compose_prior", [](const FiniteModel& model, const RewardEnsemble& ensemble,
                              const std::vector<double>& env_marginal) {
        return compose_prior(model, ensemble, as_pmf(env_marginal));
    });
    m.def("compose_prior_explicit", &compose_prior_explicit);
    m.def("check_reward_env_independence", &check_reward_env_independence);

    py::class_<NoiseLaw>(m, "NoiseLaw")
        .def(py::init<>())
        .def_static("zero", &NoiseLaw::zero)
        .def_readwrite("vectors", &NoiseLaw::vectors)
        .def_readwrite("denom", &NoiseLaw::denom)
        .def_readwrite("probs", &NoiseLaw::probs);

    py::class_<ProxyChannel>(m, "ProxyChannel")
        .def_property_readonly("codebook", &ProxyChannel::codebook)
        .def_property_readonly("n_codewords", &ProxyChannel::n_codewords)
        .def("row", [](const ProxyChannel& ch, std::size_t i) {
            return ch.row(i).probs();
        });

    m.def("make_identity_channel", &make_identity_channel);
    m.def("make_quantizer_channel", &make_quantizer_channel);
    m.def("make_noise_channel",
          [](const WorldPrior& prior, std::pair<std::int64_t, std::int64_t> k_scale,
             std::pair<std::int64_t, std::int64_t> m_shift, const NoiseLaw& w,
             const NoiseLaw& v) {
              return make_noise_channel(prior, as_scalar(k_scale), as_scalar(m_shift), w,
                                        v);
          });
    m.def("joint_reward_proxy", [](const WorldPrior& prior, const ProxyChannel& channel) {
        JointPmf j = joint_reward_proxy(prior, channel);
        std::vector<std::vector<double>> out(j.nx(), std::vector<double>(j.ny()));
        for (std::size_t x = 0; x < j.nx(); ++x) {
            for (std::size_t y = 0; y < j.ny(); ++y) out[x][y] = j.at(x, y);
        }
        return out;
    });

    // agent and valuation
    m.def("regularized_policy", [](const std::vector<double>& f,
                                   const std::vector<double>& base, double lambda) {
        return regularized_policy(f, as_pmf(base), lambda).probs();
    });
    m.def("optimal_uninformed_set", [](const WorldPrior& prior) {
        UninformedOptimum opt = optimal_uninformed_set(prior);
        return py::make_tuple(opt.optimal_policies, opt.base.probs(), opt.value);
    });
    m.def("coherent_projection", &coherent_projection);
    m.def("coherence_residual", &coherence_residual);

    m.def("executed_value", [](const WorldPrior& prior, const ProxyChannel& channel) {
        return executed_value(prior, channel);
    });
    m.def("contemporary_value", &contemporary_value);
    m.def("adversarial_value",
          [](const WorldPrior& prior) { return adversarial_value(prior); });
    m.def("primordial_quantities", [](const WorldPrior& prior, const std::string& mode) {
        PrimordialMode pm = mode == "exact-iid" ? PrimordialMode::exact_iid
                                                : PrimordialMode::grid_search;
        BaselineReport rep = primordial_quantities(prior, pm);
        py::dict d;
        d["primordial_value"] = rep.primordial_value;
        d["primordial_variance"] = rep.primordial_variance;
        d["primordial_positive_value"] = rep.primordial_positive_value;
        d["search_mode"] =
            rep.search_mode == PrimordialMode::exact_iid ? "exact-iid" : "grid-search";
        return d;
    }, py::arg("prior"), py::arg("mode") = "exact-iid");
    m.def("attainability_profile",
          [](const WorldPrior& prior, const OutcomePartition* partition) {
              AttainabilityProfile prof = attainability_profile(prior, partition);
              py::dict d;
              d["per_outcome"] = prof.per_outcome;
              d["sup_outcome"] = prof.sup_outcome;
              if (prof.per_cell) {
                  d["per_cell"] = *prof.per_cell;
                  d["sup_cell"] = *prof.sup_cell;
              }
              return d;
          },
          py::arg("prior"), py::arg("partition") = nullptr);

    // executable theorem checks
    m.def("thm1_rhs", [](double v_dagger, double v_bar, double sigma_bar,
                         double p_att_sup) {
        return thm1_rhs(v_dagger, v_bar, sigma_bar, p_att_sup).as_double();
    });
    m.def("verify_thm1", [](const WorldPrior& prior, const ProxyChannel& channel,
                            double v_dagger) {
        return report_dict(verify_thm1(prior, channel, v_dagger));
    });
    m.def("verify_thm2", [](const WorldPrior& prior, const OutcomePartition& partition,
                            const ProxyChannel& channel, double v_dagger) {
        return report_dict(verify_thm2(prior, partition, channel, v_dagger));
    });
    m.def("safe_set_demo", [](int n, double safe_prob, double v_dagger, double epsilon) {
        SafeSetDemoResult res = safe_set_demo(n, safe_prob, v_dagger, epsilon);
        py::dict d;
        d["mi_bits"] = res.mi_bits;
        d["expected_log_ratio_bits"] = res.expected_log_ratio_bits;
        d["identity_residual"] = res.identity_residual;
        d["empty_set_prob"] = res.empty_set_prob;
        d["kl_factor_bits"] = res.kl_factor_bits;
        d["approx_bits"] = res.approx_bits;
        d["approximation_gap"] = res.approximation_gap;
        return d;
    });
    m.def("value_curve", [](const WorldPrior& prior, const ProxyChannel& channel,
                            const std::vector<double>& base,
                            const std::vector<double>& lambdas) {
        auto points = value_curve(prior, channel, as_pmf(base), lambdas);
        py::list out;
        for (const auto& pt : points) {
            py::dict d;
            d["lambda"] = pt.lambda;
            d["value"] = pt.value;
            d["v0"] = pt.v0;
            d["v_bar"] = pt.v_bar;
            d["mi_bits"] = pt.mi_bits;
            out.append(d);
        }
        return out;
    });
    m.def("derivative_check", [](const WorldPrior& prior, const ProxyChannel& channel,
                                 const std::vector<double>& base) {
        auto res = derivative_check(prior, channel, as_pmf(base));
        return py::make_tuple(res.closed_form, res.finite_difference, res.pass);
    });
    m.def("uninformed_policy_variation", &uninformed_policy_variation);
    m.def("goldilocks_search", [](const WorldPrior& prior, double k_bits) {
        GoldilocksSearchResult res =
            goldilocks_search(prior, default_goldilocks_spec(k_bits));
        py::dict d;
        d["applicable"] = res.applicable;
        d["found"] = res.found;
        d["eta"] = py::make_tuple(res.eta.num, res.eta.denom);
        d["width_factor"] = res.width_factor;
        d["lambda"] = res.lambda;
        d["mi_bits"] = res.mi_bits;
        d["v_lambda"] = res.v_lambda;
        d["v0"] = res.v0;
        return d;
    });
    m.def("check_fixed_length_protocol", [](const WorldPrior& prior, int k_bits) {
        auto res = check_fixed_length_protocol(prior, k_bits);
        return py::make_tuple(res.k_bits, res.mi_bits, res.pass);
    });
    m.def("check_variable_length_protocol",
          [](const WorldPrior& prior, const std::vector<std::string>& codes) {
              auto res = check_variable_length_protocol(prior, codes);
              return py::make_tuple(res.expected_length, res.rhs_bits, res.pass);
          });

    // generators and serialization
    m.def("gen_thm1_instance", [](std::uint64_t seed, std::uint64_t trial) {
        auto inst = gen_thm1_instance(seed, trial, SizesSpec{}, ChannelMenuSpec{});
        py::dict channels;
        for (auto& [name, channel] : inst.channels) channels[py::str(name)] = channel;
        return py::make_tuple(inst.prior, channels);
    }, py::arg("seed"), py::arg("trial") = 0);
    m.def("gen_goldilocks_instance", [](std::uint64_t seed, std::uint64_t trial,
                                        double gap) {
        return gen_goldilocks_instance(seed, trial, gap);
    }, py::arg("seed"), py::arg("trial") = 0, py::arg("gap") = 0.05);

    m.def("prior_to_json", [](const WorldPrior& prior) { return to_json(prior).dump(); });
    m.def("prior_from_json", [](const std::string& text) {
        return prior_from_json(nlohmann::json::parse(text));
    });
    m.def("channel_to_json",
          [](const ProxyChannel& channel) { return to_json(channel).dump(); });
    m.def("channel_from_json", [](const std::string& text) {
        return channel_from_json(nlohmann::json::parse(text));
    });
}

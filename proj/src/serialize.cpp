#include "ghl/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ghl {

using nlohmann::json;

namespace {

constexpr const char* kWorldSchema = "ghl-world/1";
constexpr const char* kReportSchema = "ghl-report/1";

void require_schema(const json& j, const char* schema, const char* kind) {
    if (j.value("schema", "") != schema || j.value("kind", "") != kind) {
        throw IoError(std::string("expected ") + schema + "/" + kind);
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const RewardTable& table) {
    json j;
    if (table.on_grid()) {
        j["num"] = table.num();
        j["denom"] = table.denom();
    } else {
        j["values"] = table.values();
    }
    return j;
}

RewardTable reward_table_from_json(const json& j) {
    if (j.contains("num")) {
        return RewardTable::from_grid(j.at("num").get<std::vector<std::int64_t>>(),
                                      j.at("denom").get<std::int64_t>());
    }
    return RewardTable::off_grid(j.at("values").get<std::vector<double>>());
}

json to_json(const OutcomePartition& partition) {
    json j;
    j["schema"] = kWorldSchema;
    j["kind"] = "outcome_partition";
    std::vector<int> cell_of(partition.n_outcomes());
    for (int o = 0; o < partition.n_outcomes(); ++o) cell_of[o] = partition.cell_of(o);
    j["cell_of"] = cell_of;
    j["n_cells"] = partition.n_cells();
    return j;
}

OutcomePartition partition_from_json(const json& j) {
    require_schema(j, kWorldSchema, "outcome_partition");
    return OutcomePartition(j.at("cell_of").get<std::vector<int>>(),
                            j.at("n_cells").get<int>());
}

json to_json(const FiniteModel& model) {
    json j;
    j["schema"] = kWorldSchema;
    j["kind"] = "finite_model";
    j["n_outcomes"] = model.n_outcomes();
    j["n_policies"] = model.n_policies();
    j["environments"] = model.environments();
    return j;
}

FiniteModel model_from_json(const json& j) {
    require_schema(j, kWorldSchema, "finite_model");
    return FiniteModel(j.at("n_outcomes").get<int>(), j.at("n_policies").get<int>(),
                       j.at("environments").get<std::vector<FiniteModel::EnvMatrix>>());
}

json to_json(const WorldPrior& prior) {
    json j;
    j["schema"] = kWorldSchema;
    j["kind"] = "world_prior";
    j["model"] = to_json(prior.model());
    json support = json::array();
    for (const auto& t : prior.reward_support()) support.push_back(to_json(t));
    j["reward_support"] = support;
    json atoms = json::array();
    for (const auto& a : prior.atoms()) atoms.push_back({a.reward_idx, a.env_idx});
    j["atoms"] = atoms;
    j["atom_probs"] = prior.atom_probs().probs();
    j["ensemble_probs"] = prior.ensemble().probs;
    j["iid_rewards"] = prior.iid_rewards();
    j["independent_coupling"] = prior.independent_coupling();
    if (prior.cellwise()) j["cells"] = to_json(*prior.cells());
    if (!prior.ensemble().grid_num.empty()) {
        j["value_marginal"] = {{"num", prior.ensemble().grid_num},
                               {"denom", prior.ensemble().grid_denom},
                               {"probs", prior.ensemble().marginal_probs}};
    }
    return j;
}

WorldPrior prior_from_json(const json& j) {
    require_schema(j, kWorldSchema, "world_prior");
    FiniteModel model = model_from_json(j.at("model"));
    RewardEnsemble ens;
    for (const auto& t : j.at("reward_support")) {
        ens.tables.push_back(reward_table_from_json(t));
    }
    ens.probs = j.at("ensemble_probs").get<std::vector<double>>();
    ens.iid = j.at("iid_rewards").get<bool>();
    if (j.contains("cells")) ens.cells = partition_from_json(j.at("cells"));
    if (j.contains("value_marginal")) {
        const auto& m = j.at("value_marginal");
        ens.grid_num = m.at("num").get<std::vector<std::int64_t>>();
        ens.grid_denom = m.at("denom").get<std::int64_t>();
        ens.marginal_probs = m.at("probs").get<std::vector<double>>();
    }
    std::vector<WorldPrior::Atom> atoms;
    for (const auto& a : j.at("atoms")) {
        atoms.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
    }
    return WorldPrior(std::move(model), std::move(ens), std::move(atoms),
                      j.at("atom_probs").get<std::vector<double>>(),
                      j.at("independent_coupling").get<bool>());
}

json to_json(const ProxyChannel& channel) {
    json j;
    j["schema"] = kWorldSchema;
    j["kind"] = "proxy_channel";
    json codebook = json::array();
    for (const auto& cw : channel.codebook()) codebook.push_back(to_json(cw));
    j["codebook"] = codebook;
    json rows = json::array();
    for (const auto& r : channel.rows()) rows.push_back(r.probs());
    j["rows"] = rows;
    if (channel.noise_meta()) {
        const auto& meta = *channel.noise_meta();
        j["noise_meta"] = {{"k_scale", {meta.k_scale.num, meta.k_scale.denom}},
                           {"m_shift", {meta.m_shift.num, meta.m_shift.denom}}};
    }
    return j;
}

ProxyChannel channel_from_json(const json& j) {
    require_schema(j, kWorldSchema, "proxy_channel");
    std::vector<RewardTable> codebook;
    for (const auto& cw : j.at("codebook")) codebook.push_back(reward_table_from_json(cw));
    std::vector<Pmf> rows;
    for (const auto& r : j.at("rows")) rows.push_back(Pmf(r.get<std::vector<double>>()));
    std::optional<NoiseMeta> meta;
    if (j.contains("noise_meta")) {
        const auto& m = j.at("noise_meta");
        meta = NoiseMeta{{m.at("k_scale").at(0).get<std::int64_t>(),
                          m.at("k_scale").at(1).get<std::int64_t>()},
                         {m.at("m_shift").at(0).get<std::int64_t>(),
                          m.at("m_shift").at(1).get<std::int64_t>()}};
    }
    return ProxyChannel(std::move(codebook), std::move(rows), meta);
}

json to_json(const ExtReal& v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return v.value();
}

json report_to_json(const VerificationReport& report) {
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = "verification";
    j["theorem"] = report.theorem;
    json pre = json::array();
    for (const auto& p : report.preconditions) {
        pre.push_back({{"name", p.name}, {"holds", p.holds}});
    }
    j["preconditions"] = pre;
    j["lhs"] = to_json(report.lhs);
    j["rhs"] = to_json(report.rhs);
    j["margin"] = to_json(report.margin);
    j["applicable"] = report.applicable;
    j["pass"] = report.pass;
    j["context"] = report.context;
    j["digest"] = report.digest;
    return j;
}

json baseline_to_json(const BaselineReport& report) {
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = "baseline";
    j["contemporary_value"] = report.contemporary_value;
    j["primordial_value"] = report.primordial_value;
    j["primordial_variance"] = report.primordial_variance;
    j["primordial_positive_value"] = report.primordial_positive_value;
    j["adversarial_value"] = report.adversarial_value;
    j["best_uninformed_reward"] = to_json(report.best_uninformed_reward);
    j["search_mode"] =
        report.search_mode == PrimordialMode::exact_iid ? "exact-iid" : "grid-search";
    return j;
}

json attainability_to_json(const AttainabilityProfile& profile) {
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = "attainability";
    j["per_outcome"] = profile.per_outcome;
    j["sup_outcome"] = profile.sup_outcome;
    if (profile.per_cell) {
        j["per_cell"] = *profile.per_cell;
        j["sup_cell"] = *profile.sup_cell;
    }
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace ghl

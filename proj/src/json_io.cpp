#include "fairpost/json_io.hpp"

#include <cmath>

namespace fairpost {

using nlohmann::json;

json json_number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

json to_json(const AuditReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        json je{
            {"criterion", criterion_name(e.criterion)},
            {"violation", e.violation},
            {"tolerance", e.tolerance},
            {"pass", e.pass},
            {"skipped", e.skipped},
        };
        if (!e.detail.empty()) je["detail"] = e.detail;
        if (!e.notes.empty()) je["notes"] = e.notes;
        entries.push_back(std::move(je));
    }
    json counts = json::array();
    for (std::size_t a = 0; a < report.group_names.size(); ++a) {
        counts.push_back({{"group", report.group_names[a]},
                          {"pr_outcome_0", report.group_outcome_mass[a * 2]},
                          {"pr_outcome_1", report.group_outcome_mass[a * 2 + 1]}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"kind", "audit_report"},
                {"entries", std::move(entries)},
                {"group_outcome_mass", std::move(counts)},
                {"notes", report.notes},
                {"all_pass", report.all_pass()}};
}

json to_json(const AdjustmentResult& result, std::span<const std::string> group_names) {
    json params = json::array();
    json rates = json::array();
    for (std::size_t a = 0; a < result.predictor.num_groups(); ++a) {
        params.push_back({{"group", group_names[a]},
                          {"p_accept_given_pred_0", result.predictor.p_given_0[a]},
                          {"p_accept_given_pred_1", result.predictor.p_given_1[a]}});
        rates.push_back({{"group", group_names[a]},
                         {"fpr", result.achieved[a].fpr},
                         {"tpr", result.achieved[a].tpr}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"kind", "adjustment_result"},
                {"criterion", result.criterion == BinaryCriterion::equalized_odds
                                  ? "equalized_odds"
                                  : "equal_opportunity"},
                {"parameters", std::move(params)},
                {"achieved_rates", std::move(rates)},
                {"expected_loss", result.expected_loss},
                {"diagnostics",
                 {{"method", result.diagnostics.method},
                  {"candidates_evaluated", result.diagnostics.candidates_evaluated},
                  {"note", result.diagnostics.note}}}};
}

json to_json(const PolicyReport& report, std::span<const std::string> group_names) {
    json groups = json::array();
    for (std::size_t a = 0; a < report.groups.size(); ++a) {
        const RandomizedThreshold& rt = report.policy.per_group[a];
        json comps = json::array();
        for (const auto& c : rt.components())
            comps.push_back({{"threshold", json_number_or_inf(c.threshold)},
                             {"weight", c.weight}});
        json jg{{"group", group_names[a]},
                {"components", std::move(comps)},
                {"randomized", !rt.is_fixed()},
                {"fpr", report.groups[a].rates.fpr},
                {"tpr", report.groups[a].rates.tpr},
                {"acceptance_rate", report.groups[a].acceptance_rate}};
        if (rt.is_fixed()) {
            jg["threshold"] = json_number_or_inf(rt.fixed_threshold());
        } else if (rt.is_two_point()) {
            jg["t_lo"] = json_number_or_inf(rt.t_lo());
            jg["t_hi"] = json_number_or_inf(rt.t_hi());
            jg["p_lo"] = rt.p_lo();
        }
        groups.push_back(std::move(jg));
    }
    return json{{"schema_version", kSchemaVersion},
                {"kind", "policy_report"},
                {"criterion", regime_name(report.regime)},
                {"loss", {{"cost_fp", report.loss.cost_fp}, {"cost_fn", report.loss.cost_fn}}},
                {"expected_loss", report.expected_loss},
                {"residual_violation", report.residual_violation},
                {"tolerance", report.tolerance},
                {"groups", std::move(groups)},
                {"notes", report.notes}};
}

json roc_export(const ConditionalScoreDistribution& dist) {
    json groups = json::array();
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        RocCurve curve = conditional_roc(dist, a);
        json jc = json::array();
        for (const auto& p : curve.points)
            jc.push_back({{"threshold", json_number_or_inf(p.threshold)},
                          {"fpr", p.rates.fpr},
                          {"tpr", p.rates.tpr}});
        FeasibleRegion region = achievable_region(curve);
        json jr = json::array();
        for (const auto& v : region.boundary())
            jr.push_back({{"fpr", v.fpr}, {"tpr", v.tpr}});
        groups.push_back({{"group", dist.group_names()[a]},
                          {"curve", std::move(jc)},
                          {"region_upper_boundary", std::move(jr)}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"kind", "roc_export"},
                {"groups", std::move(groups)}};
}

json to_json(const TwoSampleReport& report) {
    json ks = json::array();
    for (const auto& e : report.ks) {
        ks.push_back({{"group", e.group},
                      {"outcome", e.outcome},
                      {"score", e.score == ScenarioScore::r_star ? "r_star" : "r_tilde"},
                      {"statistic", e.statistic},
                      {"band", e.band},
                      {"n1", e.n1},
                      {"n2", e.n2},
                      {"pass", e.pass}});
    }
    json cells = json::array();
    for (const auto& e : report.cells) {
        cells.push_back({{"group", e.group},
                         {"outcome", e.outcome},
                         {"freq1", e.freq1},
                         {"freq2", e.freq2},
                         {"sigma", e.sigma},
                         {"pass", e.pass}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"kind", "two_sample_report"},
                {"ks", std::move(ks)},
                {"cells", std::move(cells)},
                {"all_pass", report.all_pass()}};
}

}  // namespace fairpost

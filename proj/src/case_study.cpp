#include "fairpost/case_study.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fairpost/csv.hpp"
#include "fairpost/json_io.hpp"

namespace fairpost {

void CaseStudyConfig::validate() const {
    if (cost_fp <= 0.0 || cost_fn <= 0.0) throw Error("loss ratio must be positive");
    if (regimes.empty()) throw Error("at least one regime required");
    if (!(sweep_lo > 0.0 && sweep_hi < 1.0 && sweep_lo <= sweep_hi))
        throw Error("break-even sweep must satisfy 0 < lo <= hi < 1");
    if (sweep_step <= 0.0) throw Error("sweep step must be positive");
}

ConditionalScoreDistribution load_case_study_input(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw Error("cannot open " + path);
    std::string first;
    while (std::getline(probe, first)) {
        auto b = first.find_first_not_of(" \t\r");
        if (b == std::string::npos || first[b] == '#') continue;
        break;
    }
    SampleTable table;
    if (first.rfind("group,score,cumulative_fraction", 0) == 0)
        table = read_marginals_csv_file(path).to_samples();
    else
        table = read_samples_csv_file(path);
    return ConditionalScoreDistribution::estimate(table.samples, table.group_names);
}

double policy_profit(const ConditionalScoreDistribution& dist,
                     const RandomizedThresholdPolicy& policy, double break_even) {
    double profit = 0.0;
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        RatePoint r = policy_rates(dist, a, policy.per_group[a]);
        profit += (1.0 - break_even) * dist.pr_group_outcome(a, 1) * r.tpr -
                  break_even * dist.pr_group_outcome(a, 0) * r.fpr;
    }
    return profit;
}

namespace {

double profit_fraction_of_max(double profit, double max_profit) {
    if (max_profit <= 1e-15) return profit >= -1e-15 ? 1.0 : 0.0;
    return profit / max_profit;
}

}  // namespace

CaseStudyResult run_case_study(const ConditionalScoreDistribution& dist,
                               const CaseStudyConfig& config) {
    config.validate();
    CaseStudyResult result;
    result.group_names = dist.group_names();

    LossSpec loss{config.cost_fp, config.cost_fn};
    for (Regime r : config.regimes) result.reports.push_back(optimize_regime(dist, loss, r));

    for (const auto& rep : result.reports) {
        std::vector<double> pct;
        for (GroupId a = 0; a < dist.num_groups(); ++a)
            pct.push_back(1.0 - rep.groups[a].acceptance_rate);
        result.threshold_percentiles.push_back(std::move(pct));
    }

    // Profit at the configured ratio's break-even rate, as fractions of the
    // max-profit regime.
    double be0 = config.cost_fp / (config.cost_fp + config.cost_fn);
    double max0 = policy_profit(dist, optimize_max_profit(dist, LossSpec{be0, 1.0 - be0}).policy,
                                be0);
    for (const auto& rep : result.reports)
        result.profit_fraction.push_back(
            profit_fraction_of_max(policy_profit(dist, rep.policy, be0), max0));

    // Full sweep: re-optimize every regime at each break-even rate.
    for (double be = config.sweep_lo; be <= config.sweep_hi + 1e-12; be += config.sweep_step) {
        LossSpec l{be, 1.0 - be};
        double maxp = policy_profit(dist, optimize_max_profit(dist, l).policy, be);
        for (Regime r : config.regimes) {
            double p = policy_profit(dist, optimize_regime(dist, l, r).policy, be);
            result.profit_curve.push_back({be, r, profit_fraction_of_max(p, maxp)});
        }
    }
    return result;
}

void write_case_study_outputs(const CaseStudyResult& result, const CaseStudyConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const auto& names = result.group_names;

    {
        std::ofstream out(fs::path(config.out_dir) / "thresholds.csv");
        out << "regime,group,thresholds,weights,percentile\n";
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
            const auto& rep = result.reports[i];
            for (GroupId a = 0; a < names.size(); ++a) {
                const auto& comps = rep.policy.per_group[a].components();
                std::string ts, ws;
                for (std::size_t c = 0; c < comps.size(); ++c) {
                    if (c) {
                        ts += ';';
                        ws += ';';
                    }
                    ts += format_double(comps[c].threshold);
                    ws += format_double(comps[c].weight);
                }
                out << regime_name(rep.regime) << ',' << names[a] << ',' << ts << ',' << ws
                    << ',' << format_double(result.threshold_percentiles[i][a]) << '\n';
            }
        }
    }
    {
        std::ofstream out(fs::path(config.out_dir) / "tpr_by_group.csv");
        out << "regime,group,tpr\n";
        for (const auto& rep : result.reports)
            for (GroupId a = 0; a < names.size(); ++a)
                out << regime_name(rep.regime) << ',' << names[a] << ','
                    << format_double(rep.groups[a].rates.tpr) << '\n';
    }
    {
        std::ofstream out(fs::path(config.out_dir) / "profit_curve.csv");
        out << "break_even,regime,profit_fraction\n";
        for (const auto& row : result.profit_curve)
            out << format_double(row.break_even) << ',' << regime_name(row.regime) << ','
                << format_double(row.fraction) << '\n';
    }
    {
        nlohmann::json regimes = nlohmann::json::array();
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
            nlohmann::json jr = to_json(result.reports[i], names);
            jr["profit_fraction_of_max"] = result.profit_fraction[i];
            regimes.push_back(std::move(jr));
        }
        nlohmann::json j{{"schema_version", kSchemaVersion},
                         {"kind", "case_study"},
                         {"input", config.input_path},
                         {"loss", {{"cost_fp", config.cost_fp}, {"cost_fn", config.cost_fn}}},
                         {"break_even", config.cost_fp / (config.cost_fp + config.cost_fn)},
                         {"seed", config.seed},
                         {"groups", names},
                         {"regimes", std::move(regimes)}};
        std::ofstream out(fs::path(config.out_dir) / "casestudy.json");
        out << j.dump(2) << '\n';
    }
}

}  // namespace fairpost

#include "fairpost/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "fairpost/audit.hpp"
#include "fairpost/binary_adjust.hpp"
#include "fairpost/case_study.hpp"
#include "fairpost/csv.hpp"
#include "fairpost/json_io.hpp"
#include "fairpost/scenarios.hpp"

namespace fairpost::cli {

namespace {

void emit_json(const nlohmann::json& j, const std::string& out_path, std::ostream& diag) {
    if (out_path.empty()) {
        diag << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << j.dump(2) << '\n';
    }
}

bool resolve_binary_kind(const SampleTable& table, const std::string& kind) {
    if (kind == "binary") return true;
    if (kind == "score") return false;
    if (kind == "auto") return table.looks_binary();
    throw Error("unknown kind '" + kind + "' (expected binary, score or auto)");
}

std::optional<Regime> parse_regime(const std::string& name) {
    for (Regime r : {Regime::max_profit, Regime::group_blind, Regime::demographic_parity,
                     Regime::equal_opportunity, Regime::equalized_odds})
        if (name == regime_name(r)) return r;
    if (name == "race_blind") return Regime::group_blind;  // the case-study alias
    return std::nullopt;
}

}  // namespace

int cmd_audit(const AuditArgs& args, std::ostream& diag) {
    try {
        SampleTable table = read_samples_csv_file(args.input);
        bool binary = resolve_binary_kind(table, args.kind);

        std::vector<AuditCriterion> criteria;
        if (args.criteria.empty()) {
            auto all = all_audit_criteria();
            criteria.assign(all.begin(), all.end());
        } else {
            for (const auto& name : args.criteria) {
                auto c = parse_criterion(name);
                if (!c) {
                    diag << "unknown criterion '" << name << "'\n";
                    return kExitUsage;
                }
                criteria.push_back(*c);
            }
        }
        AuditOptions opts;
        opts.frequency_bins = args.bins;
        if (args.tol >= 0.0) {
            opts.tol_rates = args.tol;
            opts.tol_identical_roc = args.tol;
            opts.tol_matching_roc = args.tol;
            opts.tol_matching_freq = args.tol;
        }

        AuditReport report;
        if (binary) {
            auto joint =
                JointBinaryDistribution::estimate(table.as_binary(), table.group_names);
            report = audit(joint, criteria, opts);
        } else {
            auto dist =
                ConditionalScoreDistribution::estimate(table.samples, table.group_names);
            report = audit(dist, criteria, opts);
            if (!args.roc_out.empty()) emit_json(roc_export(dist), args.roc_out, diag);
        }
        emit_json(to_json(report), args.out, diag);
        return report.all_pass() ? kExitPass : kExitViolation;
    } catch (const Error& e) {
        diag << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_adjust(const AdjustArgs& args, std::ostream& diag) {
    try {
        SampleTable table = read_samples_csv_file(args.input);
        bool binary = resolve_binary_kind(table, args.kind);
        LossSpec loss{args.cost_fp, args.cost_fn};

        nlohmann::json j;
        if (binary) {
            auto joint =
                JointBinaryDistribution::estimate(table.as_binary(), table.group_names);
            AdjustmentResult res;
            if (args.criterion == "equalized_odds")
                res = derive_equalized_odds(joint, loss);
            else if (args.criterion == "equal_opportunity")
                res = derive_equal_opportunity(joint, loss);
            else {
                diag << "unknown criterion '" << args.criterion
                     << "' for binary input (expected equalized_odds or equal_opportunity)\n";
                return kExitUsage;
            }
            j = to_json(res, joint.group_names());
        } else {
            auto dist =
                ConditionalScoreDistribution::estimate(table.samples, table.group_names);
            auto regime = parse_regime(args.criterion);
            if (!regime) {
                diag << "unknown criterion '" << args.criterion << "' for score input\n";
                return kExitUsage;
            }
            PolicyReport rep = optimize_regime(dist, loss, *regime);
            j = to_json(rep, dist.group_names());
        }
        j["input"] = args.input;
        j["seed"] = args.seed;
        emit_json(j, args.out, diag);
        return kExitPass;
    } catch (const Error& e) {
        diag << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_scenario(const ScenarioArgs& args, std::ostream& diag) {
    try {
        if (args.n == 0) throw Error("sample count must be positive");
        if (args.which != 1 && args.which != 2) throw Error("scenario must be 1 or 2");
        if (args.out.empty()) throw Error("output path required");

        auto records = args.which == 1 ? sample_scenario_one(args.n, args.seed)
                                       : sample_scenario_two(args.n, args.seed);

        auto write_one = [&](ScenarioScore score, const std::string& path) {
            SampleTable table;
            table.group_names = {"0", "1"};
            table.samples = to_score_samples(records, score);
            std::ofstream out(path);
            if (!out) throw Error("cannot write " + path);
            write_samples_csv(out, table);
            return path;
        };

        std::vector<std::string> written;
        std::string score_label = args.score;
        if (args.score == "rstar") {
            written.push_back(write_one(ScenarioScore::r_star, args.out));
        } else if (args.score == "rtilde") {
            written.push_back(write_one(ScenarioScore::r_tilde, args.out));
        } else if (args.score == "both") {
            std::filesystem::path p(args.out);
            auto stem = (p.parent_path() / p.stem()).string();
            auto ext = p.extension().string();
            written.push_back(write_one(ScenarioScore::r_star, stem + ".rstar" + ext));
            written.push_back(write_one(ScenarioScore::r_tilde, stem + ".rtilde" + ext));
        } else {
            throw Error("score must be rstar, rtilde or both");
        }

        nlohmann::json meta{{"schema_version", kSchemaVersion},
                            {"kind", "scenario_metadata"},
                            {"scenario", args.which},
                            {"n", args.n},
                            {"seed", args.seed},
                            {"score", score_label},
                            {"files", written},
                            {"group_mapping", {{"-1", "0"}, {"+1", "1"}}},
                            {"outcome_mapping", {{"-1", "0"}, {"+1", "1"}}}};
        std::ofstream meta_out(args.out + ".meta.json");
        if (!meta_out) throw Error("cannot write " + args.out + ".meta.json");
        meta_out << meta.dump(2) << '\n';
        diag << "wrote " << written.size() << " file(s), n=" << args.n << '\n';
        return kExitPass;
    } catch (const Error& e) {
        diag << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_casestudy(const CaseStudyArgs& args, std::ostream& diag) {
    try {
        CaseStudyConfig config;
        config.input_path = args.input;
        config.cost_fp = args.cost_fp;
        config.cost_fn = args.cost_fn;
        config.sweep_lo = args.sweep_lo;
        config.sweep_hi = args.sweep_hi;
        config.sweep_step = args.sweep_step;
        config.out_dir = args.out_dir;
        config.seed = args.seed;
        if (!args.regimes.empty()) {
            config.regimes.clear();
            for (const auto& name : args.regimes) {
                auto r = parse_regime(name);
                if (!r) {
                    diag << "unknown regime '" << name << "'\n";
                    return kExitUsage;
                }
                config.regimes.push_back(*r);
            }
        }
        auto dist = load_case_study_input(args.input);
        CaseStudyResult result = run_case_study(dist, config);
        write_case_study_outputs(result, config);
        for (std::size_t i = 0; i < result.reports.size(); ++i)
            diag << regime_name(result.reports[i].regime) << ": loss "
                 << result.reports[i].expected_loss << ", profit fraction "
                 << result.profit_fraction[i] << '\n';
        diag << "outputs in " << config.out_dir << '\n';
        return kExitPass;
    } catch (const Error& e) {
        diag << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace fairpost::cli

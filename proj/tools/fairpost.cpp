#include <iostream>

#include <CLI11.hpp>

#include "fairpost/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fairness auditing and post-processing for binary predictors and scores"};
    app.require_subcommand(1);

    fairpost::cli::AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "audit oblivious non-discrimination criteria");
    audit->add_option("--input", audit_args.input, "samples CSV")->required();
    audit->add_option("--kind", audit_args.kind, "binary | score | auto (default auto)");
    audit->add_option("--criteria", audit_args.criteria,
                      "criteria to check (default: all applicable)");
    audit->add_option("--tol", audit_args.tol, "override every criterion tolerance");
    audit->add_option("--bins", audit_args.bins, "equal-mass bins for matching_frequencies");
    audit->add_option("--out", audit_args.out, "write report JSON here (default stdout)");
    audit->add_option("--roc-out", audit_args.roc_out,
                      "also export per-group ROC curves and regions as JSON (score inputs)");

    fairpost::cli::AdjustArgs adjust_args;
    auto* adjust = app.add_subcommand("adjust", "derive a loss-optimal fair predictor");
    adjust->add_option("--input", adjust_args.input, "samples CSV")->required();
    adjust->add_option("--kind", adjust_args.kind, "binary | score | auto (default auto)");
    adjust->add_option("--criterion", adjust_args.criterion,
                       "equalized_odds, equal_opportunity, demographic_parity, group_blind or "
                       "max_profit (binary input: first two only)");
    adjust->add_option("--cost-fp", adjust_args.cost_fp, "cost of a false positive");
    adjust->add_option("--cost-fn", adjust_args.cost_fn, "cost of a false negative");
    adjust->add_option("--seed", adjust_args.seed, "seed recorded for downstream application");
    adjust->add_option("--out", adjust_args.out, "write result JSON here (default stdout)");

    fairpost::cli::ScenarioArgs scenario_args;
    auto* scenario = app.add_subcommand("scenario", "generate a reference construction");
    scenario->add_option("--which", scenario_args.which, "1 or 2")->required();
    scenario->add_option("-n,--num", scenario_args.n, "number of records")->required();
    scenario->add_option("--seed", scenario_args.seed, "stream seed");
    scenario->add_option("--score", scenario_args.score, "rstar | rtilde | both");
    scenario->add_option("--out", scenario_args.out, "output CSV path")->required();

    fairpost::cli::CaseStudyArgs casestudy_args;
    auto* casestudy =
        app.add_subcommand("casestudy", "run the five-regime threshold comparison");
    casestudy->add_option("--input", casestudy_args.input, "samples or marginals CSV")
        ->required();
    casestudy->add_option("--cost-fp", casestudy_args.cost_fp, "cost of a false positive");
    casestudy->add_option("--cost-fn", casestudy_args.cost_fn, "cost of a false negative");
    casestudy->add_option("--regimes", casestudy_args.regimes, "subset of regimes to run");
    casestudy->add_option("--sweep-lo", casestudy_args.sweep_lo, "profit sweep start");
    casestudy->add_option("--sweep-hi", casestudy_args.sweep_hi, "profit sweep end");
    casestudy->add_option("--sweep-step", casestudy_args.sweep_step, "profit sweep step");
    casestudy->add_option("--seed", casestudy_args.seed, "seed recorded in outputs");
    casestudy->add_option("--out", casestudy_args.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (audit->parsed()) return fairpost::cli::cmd_audit(audit_args, std::cout);
    if (adjust->parsed()) return fairpost::cli::cmd_adjust(adjust_args, std::cout);
    if (scenario->parsed()) return fairpost::cli::cmd_scenario(scenario_args, std::cout);
    if (casestudy->parsed()) return fairpost::cli::cmd_casestudy(casestudy_args, std::cout);
    return fairpost::cli::kExitUsage;
}

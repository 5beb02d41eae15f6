#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairpost/joint.hpp"
#include "fairpost/policy.hpp"

namespace fairpost {

struct CaseStudyConfig {
    std::string input_path;  // samples CSV or marginals CSV, detected by header
    double cost_fp = 82.0;   // default break-even at 82% non-default
    double cost_fn = 18.0;
    std::vector<Regime> regimes = {Regime::max_profit, Regime::group_blind,
                                   Regime::demographic_parity, Regime::equal_opportunity,
                                   Regime::equalized_odds};
    double sweep_lo = 0.50;  // break-even rate sweep for the profit curve
    double sweep_hi = 0.99;
    double sweep_step = 0.01;
    std::string out_dir;
    std::uint64_t seed = 0;

    void validate() const;
};

struct CaseStudyResult {
    std::vector<std::string> group_names;
    std::vector<PolicyReport> reports;  // one per configured regime
    /// Effective per-group threshold position as a within-group population
    /// percentile: Pr{rejected | A=a}. Indexed [regime][group].
    std::vector<std::vector<double>> threshold_percentiles;
    /// Profit per regime as a fraction of the max-profit regime, at the
    /// configured loss ratio's break-even rate.
    std::vector<double> profit_fraction;

    struct ProfitRow {
        double break_even = 0.0;
        Regime regime = Regime::max_profit;
        double fraction = 0.0;
    };
    std::vector<ProfitRow> profit_curve;
};

/// Load a case-study input file; header decides between the samples format
/// and the marginals format.
ConditionalScoreDistribution load_case_study_input(const std::string& path);

/// Profit of a policy at a break-even rate b: accepting a non-defaulter earns
/// 1-b, accepting a defaulter costs b.
double policy_profit(const ConditionalScoreDistribution& dist,
                     const RandomizedThresholdPolicy& policy, double break_even);

CaseStudyResult run_case_study(const ConditionalScoreDistribution& dist,
                               const CaseStudyConfig& config);

/// Write thresholds.csv, tpr_by_group.csv, profit_curve.csv and
/// casestudy.json under config.out_dir.
void write_case_study_outputs(const CaseStudyResult& result, const CaseStudyConfig& config);

}  // namespace fairpost

#pragma once

#include <string>
#include <vector>

#include "fairpost/geometry.hpp"
#include "fairpost/joint.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/types.hpp"

namespace fairpost {

enum class Regime {
    max_profit,
    group_blind,
    demographic_parity,
    equal_opportunity,
    equalized_odds,
};

const char* regime_name(Regime r);

/// One randomized threshold per group.
struct RandomizedThresholdPolicy {
    std::vector<RandomizedThreshold> per_group;
};

struct GroupPolicyStats {
    RatePoint rates;                // achieved (fpr, tpr) within the group
    double acceptance_rate = 0.0;   // Pr{accept | A=a}
};

struct PolicyReport {
    Regime regime = Regime::max_profit;
    RandomizedThresholdPolicy policy;
    std::vector<GroupPolicyStats> groups;
    LossSpec loss;
    double expected_loss = 0.0;
    /// Worst residual of the regime's defining constraint, always within
    /// `tolerance`.
    double residual_violation = 0.0;
    double tolerance = 0.0;
    std::vector<std::string> notes;
};

enum class SearchMethod {
    ternary,    // convex search on the boundary coordinate
    enumerate,  // exact sweep over the piecewise-linear breakpoints
};

/// Per-group threshold minimizing that group's loss independently.
PolicyReport optimize_max_profit(const ConditionalScoreDistribution& dist, const LossSpec& loss);

/// A single threshold, shared by all groups, minimizing the pooled loss.
PolicyReport optimize_group_blind(const ConditionalScoreDistribution& dist,
                                  const LossSpec& loss);

/// Per-group thresholds equalizing the acceptance rate, randomized at the
/// boundary atom when the target rate falls inside one.
PolicyReport optimize_demographic_parity(const ConditionalScoreDistribution& dist,
                                         const LossSpec& loss);

/// Per-group thresholds achieving a common true positive rate at minimal
/// cost. Deterministic whenever the rate is attained on-curve; falls back to
/// a two-point mixture at atoms (noted in the report).
PolicyReport optimize_equal_opportunity(const ConditionalScoreDistribution& dist,
                                        const LossSpec& loss,
                                        SearchMethod method = SearchMethod::ternary);

/// Common (fpr, tpr) chosen on the intersection of the per-group achievable
/// regions, realized per group by a randomized threshold.
PolicyReport optimize_equalized_odds(const ConditionalScoreDistribution& dist,
                                     const LossSpec& loss,
                                     SearchMethod method = SearchMethod::ternary);

PolicyReport optimize_regime(const ConditionalScoreDistribution& dist, const LossSpec& loss,
                             Regime regime);

/// Rates achieved within one group by a randomized threshold.
RatePoint policy_rates(const ConditionalScoreDistribution& dist, GroupId a,
                       const RandomizedThreshold& rt);
double policy_acceptance(const ConditionalScoreDistribution& dist, GroupId a,
                         const RandomizedThreshold& rt);
double policy_expected_loss(const ConditionalScoreDistribution& dist,
                            const RandomizedThresholdPolicy& policy, const LossSpec& loss);

/// One randomized decision; deterministic given the stream state.
int apply_policy(const RandomizedThresholdPolicy& policy, double score, GroupId a,
                 rng::Stream& stream);

/// Joint table of (decision, group, outcome) induced by applying the policy
/// to the score distribution; the closed-loop re-audit runs on this.
JointBinaryDistribution policy_adjusted_joint(const ConditionalScoreDistribution& dist,
                                              const RandomizedThresholdPolicy& policy);

}  // namespace fairpost

#pragma once

#include <string>
#include <vector>

#include "fairpost/geometry.hpp"
#include "fairpost/joint.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/types.hpp"

namespace fairpost {

/// A randomized function of (prediction, group): flip probabilities
/// p(prediction, a) = Pr{adjusted = 1 | prediction, A = a}.
struct DerivedBinaryPredictor {
    std::vector<double> p_given_0;  // indexed by group
    std::vector<double> p_given_1;

    std::size_t num_groups() const { return p_given_0.size(); }
    double p(int prediction, GroupId a) const {
        return prediction ? p_given_1[a] : p_given_0[a];
    }
};

enum class BinaryCriterion { equalized_odds, equal_opportunity };

struct SolverDiagnostics {
    std::string method;
    std::size_t candidates_evaluated = 0;
    std::string note;
};

struct AdjustmentResult {
    DerivedBinaryPredictor predictor;
    std::vector<RatePoint> achieved;  // per group
    double expected_loss = 0.0;
    BinaryCriterion criterion = BinaryCriterion::equalized_odds;
    SolverDiagnostics diagnostics;
};

/// Loss-optimal derived predictor with equal rates across all groups. Solves
/// the small linear program directly on its two-dimensional geometry:
/// candidate optima are the vertices of the intersection of the per-group
/// polytopes.
AdjustmentResult derive_equalized_odds(const JointBinaryDistribution& joint,
                                       const LossSpec& loss);

/// Same with only the true-positive-rate equality constraint.
AdjustmentResult derive_equal_opportunity(const JointBinaryDistribution& joint,
                                          const LossSpec& loss);

/// Rates of the derived predictor within one group.
RatePoint derived_rates(const JointBinaryDistribution& joint,
                        const DerivedBinaryPredictor& pred, GroupId a);

double expected_loss(const JointBinaryDistribution& joint, const DerivedBinaryPredictor& pred,
                     const LossSpec& loss);

/// One randomized application; deterministic given the stream state.
int apply_derived(const DerivedBinaryPredictor& pred, int prediction, GroupId a,
                  rng::Stream& stream);

/// Joint table of (adjusted prediction, group, outcome) after applying the
/// derived predictor to the base joint.
JointBinaryDistribution adjusted_joint(const JointBinaryDistribution& joint,
                                       const DerivedBinaryPredictor& pred);

}  // namespace fairpost

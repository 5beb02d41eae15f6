#pragma once

// Test-only brute-force oracles, kept independent of the library's geometric
// solvers: parameter grids, pairwise chord enumeration and direct mass sums.

#include <cstdint>
#include <vector>

#include "fairpost/joint.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/types.hpp"

namespace oracles {

using fairpost::ConditionalScoreDistribution;
using fairpost::JointBinaryDistribution;
using fairpost::LossSpec;

// --- binary adjustment oracles (constraint-eliminated parameter grids with
// one local refinement pass) ---

double grid_equalized_odds_loss(const JointBinaryDistribution& joint, const LossSpec& loss,
                                double step = 0.005);
double grid_equal_opportunity_loss(const JointBinaryDistribution& joint, const LossSpec& loss,
                                   double step = 0.005);

// --- score policy oracles ---

double sweep_max_profit_loss(const ConditionalScoreDistribution& dist, const LossSpec& loss);
double sweep_group_blind_loss(const ConditionalScoreDistribution& dist, const LossSpec& loss);
double enumerate_equal_opportunity_loss(const ConditionalScoreDistribution& dist,
                                        const LossSpec& loss);
double enumerate_equalized_odds_loss(const ConditionalScoreDistribution& dist,
                                     const LossSpec& loss);
double enumerate_demographic_parity_loss(const ConditionalScoreDistribution& dist,
                                         const LossSpec& loss);

// Best achievable tpr at a given fpr from chords over raw curve points
// (O(m^2) pair enumeration; no hull code).
double brute_boundary_value(const std::vector<fairpost::RatePoint>& curve_points, double fpr);

// Raw curve points of one group's ROC, computed by direct tail sums.
std::vector<fairpost::RatePoint> brute_curve_points(const ConditionalScoreDistribution& dist,
                                                    fairpost::GroupId a);

// --- random instances ---

JointBinaryDistribution random_joint(std::size_t groups, fairpost::rng::Stream& stream);
ConditionalScoreDistribution random_score_distribution(std::size_t groups,
                                                       std::size_t max_support,
                                                       fairpost::rng::Stream& stream,
                                                       bool gridded_support = false);

}  // namespace oracles

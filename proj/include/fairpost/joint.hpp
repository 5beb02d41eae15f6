#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fairpost/types.hpp"

namespace fairpost {

struct BinarySample {
    GroupId group = 0;
    int prediction = 0;  // 0 or 1
    int outcome = 0;     // 0 or 1
    double weight = 1.0;
};

struct ScoreSample {
    GroupId group = 0;
    double score = 0.0;
    int outcome = 0;
    double weight = 1.0;
};

/// Joint probability table of (group, prediction, outcome) for a binary
/// predictor. Immutable after construction.
class JointBinaryDistribution {
public:
    /// cells indexed as [a*4 + prediction*2 + outcome]; must be nonnegative
    /// and sum to 1 within 1e-12.
    static JointBinaryDistribution from_cells(std::vector<double> cells,
                                              std::vector<std::string> group_names = {});

    /// Weighted empirical estimate. Requires positive weight in every
    /// (group, outcome) pair of the contiguous id range.
    static JointBinaryDistribution estimate(std::span<const BinarySample> samples,
                                            std::vector<std::string> group_names = {});

    /// Weighted cell-wise merge of shard estimates.
    static JointBinaryDistribution merge(std::span<const JointBinaryDistribution> parts,
                                         std::span<const double> weights);

    std::size_t num_groups() const { return cells_.size() / 4; }
    double cell(GroupId a, int prediction, int outcome) const {
        return cells_[a * 4 + static_cast<std::size_t>(prediction) * 2 +
                      static_cast<std::size_t>(outcome)];
    }
    double pr_group(GroupId a) const;
    double pr_group_outcome(GroupId a, int outcome) const;
    double pr_outcome(int outcome) const;

    /// (false positive rate, true positive rate) of the predictor within
    /// group a. Throws EmptyGroupOutcomeError if a conditioning event has
    /// zero mass.
    RatePoint gamma(GroupId a) const;

    const std::vector<std::string>& group_names() const { return group_names_; }

private:
    JointBinaryDistribution(std::vector<double> cells, std::vector<std::string> names)
        : cells_(std::move(cells)), group_names_(std::move(names)) {}

    std::vector<double> cells_;
    std::vector<std::string> group_names_;
};

/// Per-(group, outcome) empirical score distributions, with group priors and
/// base rates. Scores stay on their native scale; thresholding is order-based.
class ConditionalScoreDistribution {
public:
    struct Conditional {
        std::vector<double> support;  // strictly increasing
        std::vector<double> mass;     // sums to 1
        std::vector<double> cum;      // inclusive prefix sums of mass
    };

    static ConditionalScoreDistribution estimate(std::span<const ScoreSample> samples,
                                                 std::vector<std::string> group_names = {});

    /// Build from explicit conditionals plus the joint (group, outcome) mass
    /// table pr_ay[a*2+y].
    static ConditionalScoreDistribution from_conditionals(
        std::vector<std::array<Conditional, 2>> conditionals, std::vector<double> pr_ay,
        std::vector<std::string> group_names = {});

    std::size_t num_groups() const { return conditionals_.size(); }
    const Conditional& conditional(GroupId a, int outcome) const;

    double pr_group(GroupId a) const;               // Pr{A=a}
    double base_rate(GroupId a) const;              // Pr{Y=1 | A=a}
    double pr_group_outcome(GroupId a, int outcome) const;
    double pr_outcome(int outcome) const;

    double cdf(GroupId a, int outcome, double t) const;   // Pr{R <= t | A=a, Y=y}
    double tail(GroupId a, int outcome, double t) const;  // Pr{R > t | A=a, Y=y}
    double marginal_tail(GroupId a, double t) const;      // Pr{R > t | A=a}

    /// Distinct sorted support across both outcomes of one group.
    std::vector<double> group_support(GroupId a) const;
    /// Distinct sorted support across all groups and outcomes.
    std::vector<double> pooled_support() const;

    const std::vector<std::string>& group_names() const { return group_names_; }

private:
    ConditionalScoreDistribution() = default;

    std::vector<std::array<Conditional, 2>> conditionals_;
    std::vector<double> pr_ay_;  // Pr{A=a, Y=y}, indexed a*2+y
    std::vector<std::string> group_names_;
};

}  // namespace fairpost

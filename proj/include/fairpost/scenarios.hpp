#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairpost/joint.hpp"
#include "fairpost/types.hpp"

namespace fairpost {

/// One draw from a reference construction. Group and outcome use the +/-1
/// convention internally; the boundary to the audit and post-processing
/// modules maps +1 to group/outcome 1.
struct ScenarioRecord {
    int a = 1;        // -1 or +1
    double x1 = 0.0;  // Scenario I: equals a
    double x2 = 0.0;  // Scenario I: y + standard normal
    double x3 = 0.0;  // Scenario II: Gaussian mixture conditioned on a
    int y = 1;        // -1 or +1
    double r_star = 0.0;
    double r_tilde = 0.0;
};

/// A uniform on {-1,+1}; Pr{Y=y | A=a} = 1/(1+exp(-2ay)); X2 = Y + N(0,1);
/// scores r_star = A + X2, r_tilde = X2. Deterministic per (seed, n).
std::vector<ScenarioRecord> sample_scenario_one(std::size_t n, std::uint64_t seed);

/// A uniform on {-1,+1}; X3 | A=a is the mixture N(a+1,1) with weight
/// 1/(1+exp(-2a)) and N(a-1,1) otherwise; Pr{Y=y | X3=x} = 1/(1+exp(-2yx));
/// scores r_star = X3, r_tilde = X3 - A.
std::vector<ScenarioRecord> sample_scenario_two(std::size_t n, std::uint64_t seed);

enum class ScenarioScore { r_star, r_tilde };

/// Map records into the standard sample convention (A=+1 -> group 1,
/// Y=+1 -> outcome 1) carrying the chosen score.
std::vector<ScoreSample> to_score_samples(std::span<const ScenarioRecord> records,
                                          ScenarioScore which);

struct TwoSampleReport {
    struct KsEntry {
        GroupId group = 0;
        int outcome = 0;
        ScenarioScore score = ScenarioScore::r_star;
        double statistic = 0.0;
        double band = 0.0;  // asymptotic two-sample critical value
        std::size_t n1 = 0, n2 = 0;
        bool pass = true;
    };
    struct CellEntry {
        GroupId group = 0;
        int outcome = 0;
        double freq1 = 0.0, freq2 = 0.0;
        double sigma = 0.0;  // std of the frequency difference
        bool pass = true;
    };

    std::vector<KsEntry> ks;
    std::vector<CellEntry> cells;

    bool all_pass() const;
};

/// Compare two record sets: per (group, outcome, score) two-sample KS
/// statistics against the asymptotic band at the given level, and the (A, Y)
/// contingency tables within sigma_mult standard deviations.
TwoSampleReport two_sample_compare(std::span<const ScenarioRecord> s1,
                                   std::span<const ScenarioRecord> s2, double ks_level = 0.01,
                                   double sigma_mult = 4.0);

/// Sample both constructions and compare their joint statistics. 1e5 draws
/// per scenario keep every conditioning cell inside the KS bands.
TwoSampleReport unidentifiability_check(std::size_t n = 100000, std::uint64_t seed1 = 1,
                                        std::uint64_t seed2 = 2);

/// Two-sample critical value c(level) * sqrt((n1+n2)/(n1*n2)).
double ks_two_sample_band(std::size_t n1, std::size_t n2, double level);

}  // namespace fairpost

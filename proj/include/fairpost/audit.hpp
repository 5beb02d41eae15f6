#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairpost/joint.hpp"
#include "fairpost/types.hpp"

namespace fairpost {

enum class AuditCriterion {
    equalized_odds,
    equal_opportunity,
    demographic_parity,
    identical_roc,
    matching_roc,
    matching_frequencies,
};

const char* criterion_name(AuditCriterion c);
std::optional<AuditCriterion> parse_criterion(const std::string& name);

/// All six criteria, in a stable order.
std::span<const AuditCriterion> all_audit_criteria();

// ---- Violation magnitudes (0 iff the criterion holds exactly on the
// empirical distribution) ----

double equalized_odds_violation(const JointBinaryDistribution& joint);
double equal_opportunity_violation(const JointBinaryDistribution& joint);
double demographic_parity_violation(const JointBinaryDistribution& joint);

/// Worst sup-norm CDF gap between same-outcome score conditionals across
/// group pairs.
double equalized_odds_violation(const ConditionalScoreDistribution& dist);
double equal_opportunity_violation(const ConditionalScoreDistribution& dist);
/// Worst sup-norm gap between the groups' score marginals.
double demographic_parity_violation(const ConditionalScoreDistribution& dist);

/// Worst-case sup-norm CDF gap between two scores across all (group, outcome)
/// conditionings; a pseudometric. Throws StructureMismatchError if the group
/// structures differ.
double conditional_kolmogorov_distance(const ConditionalScoreDistribution& r1,
                                       const ConditionalScoreDistribution& r2);

struct RocCheckResult {
    bool pass = true;
    double gap = 0.0;
    std::string detail;
};

/// Same-threshold curve points must coincide across groups (Euclidean gap at
/// every pooled support threshold).
RocCheckResult identical_roc_check(const ConditionalScoreDistribution& dist, double tol);

/// Curve images must coincide as point sets: symmetric polyline distance.
RocCheckResult matching_roc_check(const ConditionalScoreDistribution& dist, double tol);

/// Interior cut points for equal-mass bins of the pooled score; the returned
/// edges are bracketed by -inf/+inf sentinels.
std::vector<double> equal_mass_bin_edges(const ConditionalScoreDistribution& dist,
                                         std::size_t bins);

/// Worst cross-group gap in Pr{Y=1 | R in bin, A=a}; empty (bin, group) cells
/// are excluded and noted.
double matching_frequencies_violation(const ConditionalScoreDistribution& dist,
                                      std::span<const double> bin_edges,
                                      std::vector<std::string>* notes = nullptr);

struct AuditEntry {
    AuditCriterion criterion = AuditCriterion::equalized_odds;
    double violation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool skipped = false;
    std::string detail;
    std::vector<std::string> notes;
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    std::vector<std::string> notes;
    std::vector<std::string> group_names;
    std::vector<double> group_outcome_mass;  // Pr{A=a, Y=y}, indexed a*2+y

    /// Worst failing margin across non-skipped entries; pass means every
    /// requested criterion is within its tolerance.
    bool all_pass() const;
};

struct AuditOptions {
    double tol_rates = 0.02;
    double tol_identical_roc = 0.03;  // Euclidean gap combines two CDF gaps
    double tol_matching_roc = 0.03;
    double tol_matching_freq = 0.05;
    std::size_t frequency_bins = 20;
};

AuditReport audit(const JointBinaryDistribution& joint,
                  std::span<const AuditCriterion> criteria, const AuditOptions& opts = {});
AuditReport audit(const ConditionalScoreDistribution& dist,
                  std::span<const AuditCriterion> criteria, const AuditOptions& opts = {});

}  // namespace fairpost

#include "fairpost/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fairpost/geometry.hpp"
#include "fairpost/kernels.hpp"

namespace fairpost {

namespace {

using Conditional = ConditionalScoreDistribution::Conditional;

// Sup-norm gap between two discrete CDFs: walk the merged support, then a
// max-abs-diff reduction over the aligned CDF arrays.
double ks_gap(const Conditional& p, const Conditional& q) {
    std::vector<double> fa, fb;
    fa.reserve(p.support.size() + q.support.size());
    fb.reserve(fa.capacity());
    std::size_t i = 0, j = 0;
    double ca = 0.0, cb = 0.0;
    while (i < p.support.size() || j < q.support.size()) {
        double t;
        if (j >= q.support.size())
            t = p.support[i];
        else if (i >= p.support.size())
            t = q.support[j];
        else
            t = std::min(p.support[i], q.support[j]);
        while (i < p.support.size() && p.support[i] == t) ca = p.cum[i++];
        while (j < q.support.size() && q.support[j] == t) cb = q.cum[j++];
        fa.push_back(ca);
        fb.push_back(cb);
    }
    return kern::max_abs_diff(fa.data(), fb.data(), fa.size());
}

// Score marginal of one group as a discrete distribution.
Conditional group_marginal(const ConditionalScoreDistribution& dist, GroupId a) {
    const Conditional& c0 = dist.conditional(a, 0);
    const Conditional& c1 = dist.conditional(a, 1);
    double p1 = dist.base_rate(a);
    Conditional out;
    std::size_t i = 0, j = 0;
    while (i < c0.support.size() || j < c1.support.size()) {
        double t;
        if (j >= c1.support.size())
            t = c0.support[i];
        else if (i >= c0.support.size())
            t = c1.support[j];
        else
            t = std::min(c0.support[i], c1.support[j]);
        double m = 0.0;
        while (i < c0.support.size() && c0.support[i] == t) m += (1.0 - p1) * c0.mass[i++];
        while (j < c1.support.size() && c1.support[j] == t) m += p1 * c1.mass[j++];
        out.support.push_back(t);
        out.mass.push_back(m);
    }
    out.cum.resize(out.mass.size());
    double run = 0.0;
    for (std::size_t k = 0; k < out.mass.size(); ++k) {
        run += out.mass[k];
        out.cum[k] = run;
    }
    return out;
}

double max_pair_gap_binary(const JointBinaryDistribution& joint, int outcome) {
    double worst = 0.0;
    for (GroupId a = 0; a < joint.num_groups(); ++a) {
        for (GroupId b = a + 1; b < joint.num_groups(); ++b) {
            RatePoint ga = joint.gamma(a), gb = joint.gamma(b);
            double va = outcome ? ga.tpr : ga.fpr;
            double vb = outcome ? gb.tpr : gb.fpr;
            worst = std::max(worst, std::fabs(va - vb));
        }
    }
    return worst;
}

}  // namespace

const char* criterion_name(AuditCriterion c) {
    switch (c) {
        case AuditCriterion::equalized_odds: return "equalized_odds";
        case AuditCriterion::equal_opportunity: return "equal_opportunity";
        case AuditCriterion::demographic_parity: return "demographic_parity";
        case AuditCriterion::identical_roc: return "identical_roc";
        case AuditCriterion::matching_roc: return "matching_roc";
        case AuditCriterion::matching_frequencies: return "matching_frequencies";
    }
    return "?";
}

std::optional<AuditCriterion> parse_criterion(const std::string& name) {
    for (AuditCriterion c : all_audit_criteria())
        if (name == criterion_name(c)) return c;
    return std::nullopt;
}

std::span<const AuditCriterion> all_audit_criteria() {
    static constexpr std::array<AuditCriterion, 6> all = {
        AuditCriterion::equalized_odds,      AuditCriterion::equal_opportunity,
        AuditCriterion::demographic_parity,  AuditCriterion::identical_roc,
        AuditCriterion::matching_roc,        AuditCriterion::matching_frequencies,
    };
    return all;
}

double equalized_odds_violation(const JointBinaryDistribution& joint) {
    return std::max(max_pair_gap_binary(joint, 0), max_pair_gap_binary(joint, 1));
}

double equal_opportunity_violation(const JointBinaryDistribution& joint) {
    return max_pair_gap_binary(joint, 1);
}

double demographic_parity_violation(const JointBinaryDistribution& joint) {
    double worst = 0.0;
    for (GroupId a = 0; a < joint.num_groups(); ++a) {
        for (GroupId b = a + 1; b < joint.num_groups(); ++b) {
            double pa = (joint.cell(a, 1, 0) + joint.cell(a, 1, 1)) / joint.pr_group(a);
            double pb = (joint.cell(b, 1, 0) + joint.cell(b, 1, 1)) / joint.pr_group(b);
            worst = std::max(worst, std::fabs(pa - pb));
        }
    }
    return worst;
}

double equalized_odds_violation(const ConditionalScoreDistribution& dist) {
    double worst = 0.0;
    for (int y = 0; y < 2; ++y)
        for (GroupId a = 0; a < dist.num_groups(); ++a)
            for (GroupId b = a + 1; b < dist.num_groups(); ++b)
                worst = std::max(worst, ks_gap(dist.conditional(a, y), dist.conditional(b, y)));
    return worst;
}

double equal_opportunity_violation(const ConditionalScoreDistribution& dist) {
    double worst = 0.0;
    for (GroupId a = 0; a < dist.num_groups(); ++a)
        for (GroupId b = a + 1; b < dist.num_groups(); ++b)
            worst = std::max(worst, ks_gap(dist.conditional(a, 1), dist.conditional(b, 1)));
    return worst;
}

double demographic_parity_violation(const ConditionalScoreDistribution& dist) {
    std::vector<Conditional> marginals;
    marginals.reserve(dist.num_groups());
    for (GroupId a = 0; a < dist.num_groups(); ++a) marginals.push_back(group_marginal(dist, a));
    double worst = 0.0;
    for (std::size_t a = 0; a < marginals.size(); ++a)
        for (std::size_t b = a + 1; b < marginals.size(); ++b)
            worst = std::max(worst, ks_gap(marginals[a], marginals[b]));
    return worst;
}

double conditional_kolmogorov_distance(const ConditionalScoreDistribution& r1,
                                       const ConditionalScoreDistribution& r2) {
    if (r1.num_groups() != r2.num_groups())
        throw StructureMismatchError("group counts differ");
    double worst = 0.0;
    for (GroupId a = 0; a < r1.num_groups(); ++a)
        for (int y = 0; y < 2; ++y)
            worst = std::max(worst, ks_gap(r1.conditional(a, y), r2.conditional(a, y)));
    return worst;
}

RocCheckResult identical_roc_check(const ConditionalScoreDistribution& dist, double tol) {
    RocCheckResult res;
    std::vector<double> thresholds = dist.pooled_support();
    double worst = 0.0;
    double worst_t = 0.0;
    GroupId wa = 0, wb = 0;
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        for (GroupId b = a + 1; b < dist.num_groups(); ++b) {
            for (double t : thresholds) {
                double d0 = dist.tail(a, 0, t) - dist.tail(b, 0, t);
                double d1 = dist.tail(a, 1, t) - dist.tail(b, 1, t);
                double g = std::hypot(d0, d1);
                if (g > worst) {
                    worst = g;
                    worst_t = t;
                    wa = a;
                    wb = b;
                }
            }
        }
    }
    res.gap = worst;
    res.pass = worst <= tol;
    if (dist.num_groups() > 1)
        res.detail = "worst at threshold " + std::to_string(worst_t) + " between groups " +
                     dist.group_names()[wa] + " and " + dist.group_names()[wb];
    return res;
}

namespace {

double point_to_polyline(RatePoint p, const std::vector<RatePoint>& line) {
    double best = kInf;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const RatePoint& a = line[i];
        const RatePoint& b = line[i + 1];
        double vx = b.fpr - a.fpr, vy = b.tpr - a.tpr;
        double len2 = vx * vx + vy * vy;
        double t = len2 > 0.0
                       ? std::clamp(((p.fpr - a.fpr) * vx + (p.tpr - a.tpr) * vy) / len2, 0.0, 1.0)
                       : 0.0;
        double dx = p.fpr - (a.fpr + t * vx), dy = p.tpr - (a.tpr + t * vy);
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
    }
    if (line.size() == 1) {
        double dx = p.fpr - line[0].fpr, dy = p.tpr - line[0].tpr;
        best = std::sqrt(dx * dx + dy * dy);
    }
    return best;
}

// Directed polyline distance sampled at vertices and segment midpoints.
double directed_polyline_gap(const std::vector<RatePoint>& from,
                             const std::vector<RatePoint>& to) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        worst = std::max(worst, point_to_polyline(from[i], to));
        if (i + 1 < from.size()) {
            RatePoint mid{0.5 * (from[i].fpr + from[i + 1].fpr),
                          0.5 * (from[i].tpr + from[i + 1].tpr)};
            worst = std::max(worst, point_to_polyline(mid, to));
        }
    }
    return worst;
}

}  // namespace

namespace {

// Thin a monotone polyline: drop points while the step since the last kept
// vertex stays below delta in both coordinates. Dropped points sit inside the
// axis-aligned box between kept neighbors, so the image moves by at most
// delta.
std::vector<RatePoint> thin_monotone(const std::vector<RatePoint>& pts, double delta) {
    if (delta <= 0.0 || pts.size() < 3) return pts;
    std::vector<RatePoint> kept = {pts.front()};
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        if (pts[i].fpr - kept.back().fpr >= delta || pts[i].tpr - kept.back().tpr >= delta)
            kept.push_back(pts[i]);
    }
    kept.push_back(pts.back());
    return kept;
}

}  // namespace

RocCheckResult matching_roc_check(const ConditionalScoreDistribution& dist, double tol) {
    RocCheckResult res;
    std::vector<std::vector<RatePoint>> images(dist.num_groups());
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        RocCurve curve = conditional_roc(dist, a);
        std::vector<RatePoint> pts;
        pts.reserve(curve.points.size());
        for (const auto& p : curve.points) pts.push_back(p.rates);
        images[a] = thin_monotone(pts, tol / 8.0);
    }
    double worst = 0.0;
    GroupId wa = 0, wb = 0;
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        for (GroupId b = a + 1; b < dist.num_groups(); ++b) {
            double g = std::max(directed_polyline_gap(images[a], images[b]),
                                directed_polyline_gap(images[b], images[a]));
            if (g > worst) {
                worst = g;
                wa = a;
                wb = b;
            }
        }
    }
    res.gap = worst;
    res.pass = worst <= tol;
    if (dist.num_groups() > 1)
        res.detail = "worst image gap between groups " + dist.group_names()[wa] + " and " +
                     dist.group_names()[wb];
    return res;
}

std::vector<double> equal_mass_bin_edges(const ConditionalScoreDistribution& dist,
                                         std::size_t bins) {
    if (bins == 0) throw Error("need at least one bin");
    // Pooled marginal over all groups.
    std::vector<std::pair<double, double>> pooled;  // (score, mass)
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        for (int y = 0; y < 2; ++y) {
            const Conditional& c = dist.conditional(a, y);
            double w = dist.pr_group_outcome(a, y);
            for (std::size_t i = 0; i < c.support.size(); ++i)
                pooled.emplace_back(c.support[i], w * c.mass[i]);
        }
    }
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> edges = {-kInf};
    double run = 0.0;
    std::size_t next = 1;
    for (const auto& [score, mass] : pooled) {
        run += mass;
        while (next < bins && run >= static_cast<double>(next) / static_cast<double>(bins)) {
            if (edges.back() != score) edges.push_back(score);
            ++next;
        }
    }
    edges.push_back(kInf);
    return edges;
}

double matching_frequencies_violation(const ConditionalScoreDistribution& dist,
                                      std::span<const double> bin_edges,
                                      std::vector<std::string>* notes) {
    if (bin_edges.size() < 2) throw Error("need at least two bin edges");
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < bin_edges.size(); ++j) {
        double lo = bin_edges[j], hi = bin_edges[j + 1];
        double rate_min = kInf, rate_max = -kInf;
        for (GroupId a = 0; a < dist.num_groups(); ++a) {
            double w1 = dist.pr_group_outcome(a, 1) * (dist.cdf(a, 1, hi) - dist.cdf(a, 1, lo));
            double w0 = dist.pr_group_outcome(a, 0) * (dist.cdf(a, 0, hi) - dist.cdf(a, 0, lo));
            if (w0 + w1 <= 0.0) {
                if (notes)
                    notes->push_back("bin " + std::to_string(j) + " empty for group " +
                                     dist.group_names()[a] + ", excluded");
                continue;
            }
            double rate = w1 / (w0 + w1);
            rate_min = std::min(rate_min, rate);
            rate_max = std::max(rate_max, rate);
        }
        if (rate_max >= rate_min) worst = std::max(worst, rate_max - rate_min);
    }
    return worst;
}

bool AuditReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.skipped && !e.pass) return false;
    return true;
}

namespace {

void add_common_notes(AuditReport& rep) {
    rep.notes.push_back(
        "violations measure unfairness on the empirical joint distribution; a passing audit is "
        "not a proof of fairness");
}

}  // namespace

AuditReport audit(const JointBinaryDistribution& joint, std::span<const AuditCriterion> criteria,
                  const AuditOptions& opts) {
    AuditReport rep;
    rep.group_names = joint.group_names();
    for (GroupId a = 0; a < joint.num_groups(); ++a)
        for (int y = 0; y < 2; ++y) rep.group_outcome_mass.push_back(joint.pr_group_outcome(a, y));
    for (AuditCriterion c : criteria) {
        AuditEntry e;
        e.criterion = c;
        switch (c) {
            case AuditCriterion::equalized_odds:
                e.violation = equalized_odds_violation(joint);
                e.tolerance = opts.tol_rates;
                break;
            case AuditCriterion::equal_opportunity:
                e.violation = equal_opportunity_violation(joint);
                e.tolerance = opts.tol_rates;
                break;
            case AuditCriterion::demographic_parity:
                e.violation = demographic_parity_violation(joint);
                e.tolerance = opts.tol_rates;
                break;
            case AuditCriterion::identical_roc:
            case AuditCriterion::matching_roc:
                e.skipped = true;
                e.notes.push_back("requires a real-valued score input");
                break;
            case AuditCriterion::matching_frequencies: {
                // Two natural bins: the prediction values themselves. Equal
                // conditional precision of the binary predictor.
                double worst = 0.0;
                for (int pred = 0; pred < 2; ++pred) {
                    double rmin = kInf, rmax = -kInf;
                    for (GroupId a = 0; a < joint.num_groups(); ++a) {
                        double w1 = joint.cell(a, pred, 1);
                        double w0 = joint.cell(a, pred, 0);
                        if (w0 + w1 <= 0.0) {
                            e.notes.push_back("prediction " + std::to_string(pred) +
                                              " empty for group " + joint.group_names()[a] +
                                              ", excluded");
                            continue;
                        }
                        double r = w1 / (w0 + w1);
                        rmin = std::min(rmin, r);
                        rmax = std::max(rmax, r);
                    }
                    if (rmax >= rmin) worst = std::max(worst, rmax - rmin);
                }
                e.violation = worst;
                e.tolerance = opts.tol_matching_freq;
                e.notes.push_back(
                    "binary precision parity; threshold predictors built from a score need not "
                    "inherit it");
                break;
            }
        }
        e.pass = e.skipped || e.violation <= e.tolerance;
        rep.entries.push_back(std::move(e));
    }
    add_common_notes(rep);
    return rep;
}

AuditReport audit(const ConditionalScoreDistribution& dist,
                  std::span<const AuditCriterion> criteria, const AuditOptions& opts) {
    AuditReport rep;
    rep.group_names = dist.group_names();
    for (GroupId a = 0; a < dist.num_groups(); ++a)
        for (int y = 0; y < 2; ++y) rep.group_outcome_mass.push_back(dist.pr_group_outcome(a, y));
    for (AuditCriterion c : criteria) {
        AuditEntry e;
        e.criterion = c;
        switch (c) {
            case AuditCriterion::equalized_odds:
                e.violation = equalized_odds_violation(dist);
                e.tolerance = opts.tol_rates;
                break;
            case AuditCriterion::equal_opportunity:
                e.violation = equal_opportunity_violation(dist);
                e.tolerance = opts.tol_rates;
                break;
            case AuditCriterion::demographic_parity:
                e.violation = demographic_parity_violation(dist);
                e.tolerance = opts.tol_rates;
                break;
            case AuditCriterion::identical_roc: {
                RocCheckResult r = identical_roc_check(dist, opts.tol_identical_roc);
                e.violation = r.gap;
                e.tolerance = opts.tol_identical_roc;
                e.detail = r.detail;
                break;
            }
            case AuditCriterion::matching_roc: {
                RocCheckResult r = matching_roc_check(dist, opts.tol_matching_roc);
                e.violation = r.gap;
                e.tolerance = opts.tol_matching_roc;
                e.detail = r.detail;
                break;
            }
            case AuditCriterion::matching_frequencies: {
                std::vector<double> edges = equal_mass_bin_edges(dist, opts.frequency_bins);
                e.violation = matching_frequencies_violation(dist, edges, &e.notes);
                e.tolerance = opts.tol_matching_freq;
                e.detail = std::to_string(opts.frequency_bins) + " equal-mass bins";
                break;
            }
        }
        e.pass = e.skipped || e.violation <= e.tolerance;
        rep.entries.push_back(std::move(e));
    }
    add_common_notes(rep);
    return rep;
}

}  // namespace fairpost

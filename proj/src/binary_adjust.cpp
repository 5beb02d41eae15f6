#include "fairpost/binary_adjust.hpp"

#include <algorithm>
#include <cmath>

namespace fairpost {

namespace {

struct GroupParams {
    double p0 = 0.0;
    double p1 = 0.0;
};

// Recover (p0, p1) from the target rates: the rate map is the affine
// combination gamma = p1 * g + p0 * (1 - g) of the vertex rates.
GroupParams solve_params(RatePoint g, RatePoint target) {
    double det = g.tpr - g.fpr;
    GroupParams out;
    if (std::fabs(det) < 1e-12) {
        // Uninformative base predictor: the polytope is the diagonal and the
        // target must sit on it; a constant coin realizes it.
        double c = 0.5 * (target.fpr + target.tpr);
        out.p0 = out.p1 = std::clamp(c, 0.0, 1.0);
        return out;
    }
    out.p0 = (target.fpr * g.tpr - g.fpr * target.tpr) / det;
    out.p1 = ((1.0 - g.fpr) * target.tpr - (1.0 - g.tpr) * target.fpr) / det;
    out.p0 = std::clamp(out.p0, 0.0, 1.0);
    out.p1 = std::clamp(out.p1, 0.0, 1.0);
    return out;
}

double randomization_amount(const DerivedBinaryPredictor& pred) {
    double r = 0.0;
    for (double p : pred.p_given_0) r += std::min(p, 1.0 - p);
    for (double p : pred.p_given_1) r += std::min(p, 1.0 - p);
    return r;
}

DerivedBinaryPredictor build_predictor(const std::vector<RatePoint>& gammas,
                                       const std::vector<RatePoint>& targets) {
    DerivedBinaryPredictor pred;
    pred.p_given_0.resize(gammas.size());
    pred.p_given_1.resize(gammas.size());
    for (std::size_t a = 0; a < gammas.size(); ++a) {
        GroupParams gp = solve_params(gammas[a], targets[a]);
        pred.p_given_0[a] = gp.p0;
        pred.p_given_1[a] = gp.p1;
    }
    return pred;
}

struct Candidate {
    double loss = 0.0;
    double tie_fpr = 0.0;
    DerivedBinaryPredictor pred;
    std::vector<RatePoint> achieved;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.loss < b.loss - 1e-12) return true;
    if (a.loss > b.loss + 1e-12) return false;
    if (a.tie_fpr < b.tie_fpr - 1e-12) return true;
    if (a.tie_fpr > b.tie_fpr + 1e-12) return false;
    return randomization_amount(a.pred) < randomization_amount(b.pred);
}

}  // namespace

RatePoint derived_rates(const JointBinaryDistribution& joint,
                        const DerivedBinaryPredictor& pred, GroupId a) {
    RatePoint g = joint.gamma(a);
    double p0 = pred.p(0, a), p1 = pred.p(1, a);
    return {p1 * g.fpr + p0 * (1.0 - g.fpr), p1 * g.tpr + p0 * (1.0 - g.tpr)};
}

double expected_loss(const JointBinaryDistribution& joint, const DerivedBinaryPredictor& pred,
                     const LossSpec& loss) {
    double total = 0.0;
    for (GroupId a = 0; a < joint.num_groups(); ++a) {
        RatePoint r = derived_rates(joint, pred, a);
        total += loss.cost_fp * joint.pr_group_outcome(a, 0) * r.fpr +
                 loss.cost_fn * joint.pr_group_outcome(a, 1) * (1.0 - r.tpr);
    }
    return total;
}

AdjustmentResult derive_equalized_odds(const JointBinaryDistribution& joint,
                                       const LossSpec& loss) {
    loss.validate();
    const std::size_t k = joint.num_groups();
    if (k < 2) throw Error("equalized odds needs at least 2 groups");

    std::vector<RatePoint> gammas(k);
    std::vector<ConvexPolygon> polys;
    bool degenerate = false;
    for (GroupId a = 0; a < k; ++a) {
        gammas[a] = joint.gamma(a);
        polys.push_back(binary_polytope(joint, a));
        if (polys.back().vertices().size() < 3) degenerate = true;
    }

    // Feasible common rates: the intersection of the per-group polytopes.
    // Every polytope contains the whole diagonal, so a degenerate (diagonal)
    // polytope collapses the intersection to the diagonal itself.
    std::vector<RatePoint> candidates;
    if (degenerate) {
        candidates = {{0.0, 0.0}, {1.0, 1.0}};
    } else {
        ConvexPolygon inter = polys[0];
        for (std::size_t i = 1; i < polys.size(); ++i) inter = inter.clipped_to(polys[i]);
        candidates = inter.vertices();
    }

    const double w_fp = loss.cost_fp * joint.pr_outcome(0);
    const double w_fn = loss.cost_fn * joint.pr_outcome(1);

    Candidate best;
    bool have = false;
    for (const RatePoint& v : candidates) {
        Candidate c;
        c.achieved.assign(k, v);
        c.pred = build_predictor(gammas, c.achieved);
        c.loss = w_fp * v.fpr + w_fn * (1.0 - v.tpr);
        c.tie_fpr = v.fpr;
        if (!have || better(c, best)) {
            best = std::move(c);
            have = true;
        }
    }

    AdjustmentResult out;
    out.predictor = std::move(best.pred);
    out.achieved = std::move(best.achieved);
    out.expected_loss = best.loss;
    out.criterion = BinaryCriterion::equalized_odds;
    out.diagnostics = {"polytope-vertex-enumeration", candidates.size(),
                       degenerate ? "degenerate polytope: searched the diagonal" : ""};
    return out;
}

AdjustmentResult derive_equal_opportunity(const JointBinaryDistribution& joint,
                                          const LossSpec& loss) {
    loss.validate();
    const std::size_t k = joint.num_groups();
    if (k < 2) throw Error("equal opportunity needs at least 2 groups");

    std::vector<RatePoint> gammas(k);
    std::vector<ConvexPolygon> polys;
    for (GroupId a = 0; a < k; ++a) {
        gammas[a] = joint.gamma(a);
        polys.push_back(binary_polytope(joint, a));
    }

    // Cost as a function of the common true positive rate is piecewise linear
    // with breakpoints at polytope vertex heights, so evaluating those is
    // exact.
    std::vector<double> nus = {0.0, 1.0};
    for (const auto& poly : polys)
        for (const auto& v : poly.vertices()) nus.push_back(v.tpr);
    std::sort(nus.begin(), nus.end());
    nus.erase(std::unique(nus.begin(), nus.end()), nus.end());

    const double w_fn = loss.cost_fn * joint.pr_outcome(1);

    Candidate best;
    bool have = false;
    for (double nu : nus) {
        Candidate c;
        c.achieved.resize(k);
        double fp_cost = 0.0;
        for (GroupId a = 0; a < k; ++a) {
            double x = polys[a].min_fpr_at_tpr(nu);
            c.achieved[a] = {x, nu};
            fp_cost += loss.cost_fp * joint.pr_group_outcome(a, 0) * x;
        }
        c.pred = build_predictor(gammas, c.achieved);
        c.loss = fp_cost + w_fn * (1.0 - nu);
        c.tie_fpr = fp_cost;
        if (!have || better(c, best)) {
            best = std::move(c);
            have = true;
        }
    }

    AdjustmentResult out;
    out.predictor = std::move(best.pred);
    out.achieved = std::move(best.achieved);
    out.expected_loss = best.loss;
    out.criterion = BinaryCriterion::equal_opportunity;
    out.diagnostics = {"tpr-breakpoint-enumeration", nus.size(), ""};
    return out;
}

JointBinaryDistribution adjusted_joint(const JointBinaryDistribution& joint,
                                       const DerivedBinaryPredictor& pred) {
    const std::size_t k = joint.num_groups();
    if (pred.num_groups() != k) throw StructureMismatchError("predictor group count");
    std::vector<double> cells(k * 4, 0.0);
    for (GroupId a = 0; a < k; ++a) {
        for (int y = 0; y < 2; ++y) {
            double from1 = joint.cell(a, 1, y);
            double from0 = joint.cell(a, 0, y);
            double accept = std::clamp(pred.p(1, a) * from1 + pred.p(0, a) * from0, 0.0,
                                       from1 + from0);
            cells[a * 4 + 2 + static_cast<std::size_t>(y)] = accept;
            cells[a * 4 + static_cast<std::size_t>(y)] = from1 + from0 - accept;
        }
    }
    return JointBinaryDistribution::from_cells(std::move(cells), joint.group_names());
}

int apply_derived(const DerivedBinaryPredictor& pred, int prediction, GroupId a,
                  rng::Stream& stream) {
    if (a >= pred.num_groups()) throw UnknownGroupError(a);
    if (prediction != 0 && prediction != 1) throw Error("prediction must be 0 or 1");
    return stream.next_bernoulli(pred.p(prediction, a)) ? 1 : 0;
}

}  // namespace fairpost

#include "fairpost/policy.hpp"

#include <algorithm>
#include <cmath>

#include "fairpost/kernels.hpp"

namespace fairpost {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::max_profit: return "max_profit";
        case Regime::group_blind: return "group_blind";
        case Regime::demographic_parity: return "demographic_parity";
        case Regime::equal_opportunity: return "equal_opportunity";
        case Regime::equalized_odds: return "equalized_odds";
    }
    return "?";
}

RatePoint policy_rates(const ConditionalScoreDistribution& dist, GroupId a,
                       const RandomizedThreshold& rt) {
    RatePoint r{0.0, 0.0};
    for (const auto& c : rt.components()) {
        r.fpr += c.weight * dist.tail(a, 0, c.threshold);
        r.tpr += c.weight * dist.tail(a, 1, c.threshold);
    }
    return r;
}

double policy_acceptance(const ConditionalScoreDistribution& dist, GroupId a,
                         const RandomizedThreshold& rt) {
    double p = 0.0;
    for (const auto& c : rt.components()) p += c.weight * dist.marginal_tail(a, c.threshold);
    return p;
}

double policy_expected_loss(const ConditionalScoreDistribution& dist,
                            const RandomizedThresholdPolicy& policy, const LossSpec& loss) {
    double total = 0.0;
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        RatePoint r = policy_rates(dist, a, policy.per_group[a]);
        total += loss.cost_fp * dist.pr_group_outcome(a, 0) * r.fpr +
                 loss.cost_fn * dist.pr_group_outcome(a, 1) * (1.0 - r.tpr);
    }
    return total;
}

int apply_policy(const RandomizedThresholdPolicy& policy, double score, GroupId a,
                 rng::Stream& stream) {
    if (a >= policy.per_group.size()) throw UnknownGroupError(a);
    const RandomizedThreshold& rt = policy.per_group[a];
    double threshold;
    if (rt.is_fixed()) {
        threshold = rt.fixed_threshold();
    } else {
        double u = stream.next_uniform();
        double cum = 0.0;
        threshold = rt.components().back().threshold;
        for (const auto& c : rt.components()) {
            cum += c.weight;
            if (u < cum) {
                threshold = c.threshold;
                break;
            }
        }
    }
    return score > threshold ? 1 : 0;
}

namespace {

constexpr double kTernaryTol = 1e-9;
constexpr int kTernaryMaxIter = 200;

// Bracket the minimum of a convex function on [lo, hi].
template <typename F>
std::pair<double, double> ternary_minimize(F&& f, double lo, double hi) {
    for (int it = 0; it < kTernaryMaxIter && hi - lo > kTernaryTol; ++it) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        double f1 = f(m1), f2 = f(m2);
        if (f1 < f2)
            hi = m2;
        else if (f1 > f2)
            lo = m1;
        else {
            lo = m1;
            hi = m2;
        }
    }
    return {lo, hi};
}

// Minimize a piecewise-linear convex objective whose breakpoints are known:
// for the ternary method, search first and then snap to the breakpoints near
// the bracket (the minimum of a piecewise-linear convex function sits on
// one); for the enumerate method, sweep all of them. Ties resolve to the
// smallest coordinate.
template <typename F>
double minimize_on_breakpoints(F&& f, const std::vector<double>& breakpoints,
                               SearchMethod method) {
    double best_x = 0.0, best_f = 0.0;
    bool have = false;
    auto consider = [&](double x) {
        double v = f(x);
        if (!have || v < best_f - 1e-15 || (v <= best_f + 1e-15 && x < best_x)) {
            best_x = x;
            best_f = v;
            have = true;
        }
    };
    if (method == SearchMethod::enumerate) {
        for (double x : breakpoints) consider(x);
        return best_x;
    }
    auto [lo, hi] = ternary_minimize(f, 0.0, 1.0);
    double pad = 10.0 * (hi - lo) + kTernaryTol;
    for (double x : breakpoints)
        if (x >= lo - pad && x <= hi + pad) consider(x);
    consider(0.5 * (lo + hi));
    return best_x;
}

struct GroupContext {
    RocCurve curve;
    FeasibleRegion region;
    double n0;  // Pr{A=a, Y=0}
    double n1;  // Pr{A=a, Y=1}
};

std::vector<GroupContext> build_contexts(const ConditionalScoreDistribution& dist) {
    std::vector<GroupContext> ctx;
    ctx.reserve(dist.num_groups());
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        RocCurve curve = conditional_roc(dist, a);
        FeasibleRegion region = achievable_region(curve);
        ctx.push_back({std::move(curve), std::move(region), dist.pr_group_outcome(a, 0),
                       dist.pr_group_outcome(a, 1)});
    }
    return ctx;
}

// Smallest fpr on the region boundary reaching the given tpr.
double min_fpr_at_tpr(const FeasibleRegion& region, double tpr) {
    const auto& verts = region.boundary();
    if (tpr <= 0.0) return 0.0;
    for (std::size_t i = 1; i < verts.size(); ++i) {
        if (verts[i].tpr >= tpr) {
            const RatePoint& lo = verts[i - 1];
            const RatePoint& hi = verts[i];
            if (hi.tpr == lo.tpr) return lo.fpr;
            double t = (tpr - lo.tpr) / (hi.tpr - lo.tpr);
            return lo.fpr + t * (hi.fpr - lo.fpr);
        }
    }
    return 1.0;
}

PolicyReport finish_report(const ConditionalScoreDistribution& dist, Regime regime,
                           RandomizedThresholdPolicy policy, const LossSpec& loss,
                           double tolerance, std::vector<std::string> notes) {
    PolicyReport rep;
    rep.regime = regime;
    rep.loss = loss;
    rep.groups.resize(dist.num_groups());
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        rep.groups[a].rates = policy_rates(dist, a, policy.per_group[a]);
        rep.groups[a].acceptance_rate = policy_acceptance(dist, a, policy.per_group[a]);
        if (!policy.per_group[a].is_fixed() && regime == Regime::equal_opportunity)
            notes.push_back("group " + dist.group_names()[a] +
                            ": target rate falls inside a score atom, randomized mixture used");
        if (policy.per_group[a].components().size() > 2)
            notes.push_back("group " + dist.group_names()[a] +
                            ": three-point mixture needed to realize an interior rate target");
    }
    rep.expected_loss = policy_expected_loss(dist, policy, loss);

    double residual = 0.0;
    auto pair_gap = [&](auto&& get) {
        double worst = 0.0;
        for (std::size_t i = 0; i < rep.groups.size(); ++i)
            for (std::size_t j = i + 1; j < rep.groups.size(); ++j)
                worst = std::max(worst, std::fabs(get(rep.groups[i]) - get(rep.groups[j])));
        return worst;
    };
    switch (regime) {
        case Regime::equalized_odds:
            residual = std::max(pair_gap([](const GroupPolicyStats& g) { return g.rates.fpr; }),
                                pair_gap([](const GroupPolicyStats& g) { return g.rates.tpr; }));
            break;
        case Regime::equal_opportunity:
            residual = pair_gap([](const GroupPolicyStats& g) { return g.rates.tpr; });
            break;
        case Regime::demographic_parity:
            residual = pair_gap([](const GroupPolicyStats& g) { return g.acceptance_rate; });
            break;
        case Regime::max_profit:
        case Regime::group_blind:
            residual = 0.0;
            break;
    }
    rep.residual_violation = residual;
    rep.tolerance = tolerance;
    if (residual > tolerance)
        throw Error(std::string(regime_name(regime)) +
                    ": solver produced a policy violating its own criterion (residual " +
                    std::to_string(residual) + ")");
    rep.policy = std::move(policy);
    rep.notes = std::move(notes);
    return rep;
}

}  // namespace

PolicyReport optimize_max_profit(const ConditionalScoreDistribution& dist,
                                 const LossSpec& loss) {
    loss.validate();
    auto ctx = build_contexts(dist);
    RandomizedThresholdPolicy policy;
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        const auto& curve = ctx[a].curve.points;
        std::vector<double> fprs(curve.size()), tprs(curve.size());
        for (std::size_t i = 0; i < curve.size(); ++i) {
            fprs[i] = curve[i].rates.fpr;
            tprs[i] = curve[i].rates.tpr;
        }
        // loss(t) = cost_fp*n0*fpr(t) + cost_fn*n1*(1 - tpr(t)); the curve is
        // sorted by increasing fpr, so the first minimum has the smallest fpr.
        auto m = kern::min_affine(fprs.data(), tprs.data(), fprs.size(),
                                  loss.cost_fp * ctx[a].n0, -loss.cost_fn * ctx[a].n1);
        policy.per_group.push_back(RandomizedThreshold::fixed(curve[m.index].threshold));
    }
    return finish_report(dist, Regime::max_profit, std::move(policy), loss, 0.0, {});
}

PolicyReport optimize_group_blind(const ConditionalScoreDistribution& dist,
                                  const LossSpec& loss) {
    loss.validate();
    std::vector<double> thresholds = dist.pooled_support();
    // Descending thresholds so the earliest minimum has the smallest fpr; the
    // reject-everyone case coincides with the maximal support threshold and
    // accept-everyone is the -inf sentinel.
    std::reverse(thresholds.begin(), thresholds.end());
    thresholds.push_back(-kInf);

    std::vector<double> fp_mass(thresholds.size(), 0.0), fn_gain(thresholds.size(), 0.0);
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        double n0 = dist.pr_group_outcome(a, 0), n1 = dist.pr_group_outcome(a, 1);
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            fp_mass[i] += n0 * dist.tail(a, 0, thresholds[i]);
            fn_gain[i] += n1 * dist.tail(a, 1, thresholds[i]);
        }
    }
    auto m = kern::min_affine(fp_mass.data(), fn_gain.data(), thresholds.size(), loss.cost_fp,
                              -loss.cost_fn);
    RandomizedThresholdPolicy policy;
    for (GroupId a = 0; a < dist.num_groups(); ++a)
        policy.per_group.push_back(RandomizedThreshold::fixed(thresholds[m.index]));
    return finish_report(dist, Regime::group_blind, std::move(policy), loss, 0.0, {});
}

PolicyReport optimize_demographic_parity(const ConditionalScoreDistribution& dist,
                                         const LossSpec& loss) {
    loss.validate();
    // Per group, walk thresholds downward and knot (acceptance rate, cost);
    // mixing adjacent thresholds interpolates both linearly, so the group
    // cost at a common acceptance rate is piecewise linear in it.
    struct Knot {
        double accept;
        double cost;
        double threshold;
    };
    const std::size_t k = dist.num_groups();
    std::vector<std::vector<Knot>> knots(k);
    for (GroupId a = 0; a < k; ++a) {
        double n0 = dist.pr_group_outcome(a, 0), n1 = dist.pr_group_outcome(a, 1);
        std::vector<double> support = dist.group_support(a);
        std::vector<double> ts;
        ts.reserve(support.size() + 1);
        for (auto it = support.rbegin(); it != support.rend(); ++it) ts.push_back(*it);
        ts.push_back(-kInf);
        auto& ks = knots[a];
        ks.push_back({0.0, loss.cost_fn * n1, kInf});
        for (double t : ts) {
            double accept = dist.marginal_tail(a, t);
            double cost = loss.cost_fp * n0 * dist.tail(a, 0, t) +
                          loss.cost_fn * n1 * (1.0 - dist.tail(a, 1, t));
            if (accept <= ks.back().accept) continue;
            ks.push_back({accept, cost, t});
        }
        if (ks.back().accept < 1.0) ks.push_back({1.0, loss.cost_fp * n0, -kInf});
    }

    auto group_cost_at = [&](GroupId a, double r) {
        const auto& ks = knots[a];
        auto it = std::lower_bound(ks.begin(), ks.end(), r,
                                   [](const Knot& kn, double q) { return kn.accept < q; });
        if (it == ks.begin()) return it->cost;
        if (it == ks.end()) return ks.back().cost;
        if (it->accept == r) return it->cost;
        const Knot& hi = *it;
        const Knot& lo = *(it - 1);
        double t = (r - lo.accept) / (hi.accept - lo.accept);
        return lo.cost + t * (hi.cost - lo.cost);
    };
    auto total_cost = [&](double r) {
        double c = 0.0;
        for (GroupId a = 0; a < k; ++a) c += group_cost_at(a, r);
        return c;
    };

    std::vector<double> breakpoints = {0.0, 1.0};
    for (GroupId a = 0; a < k; ++a)
        for (const auto& kn : knots[a]) breakpoints.push_back(kn.accept);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    // The cost need not be convex at empirical atoms, so sweep the
    // breakpoints exactly instead of relying on a convex search.
    double best_r = minimize_on_breakpoints(total_cost, breakpoints, SearchMethod::enumerate);

    RandomizedThresholdPolicy policy;
    for (GroupId a = 0; a < k; ++a) {
        const auto& ks = knots[a];
        auto it = std::lower_bound(ks.begin(), ks.end(), best_r,
                                   [](const Knot& kn, double q) { return kn.accept < q; });
        if (it != ks.end() && it->accept == best_r) {
            policy.per_group.push_back(RandomizedThreshold::fixed(it->threshold));
            continue;
        }
        if (it == ks.begin() || it == ks.end()) {
            policy.per_group.push_back(
                RandomizedThreshold::fixed(it == ks.begin() ? kInf : -kInf));
            continue;
        }
        const Knot& hi = *it;
        const Knot& lo = *(it - 1);
        double lambda = (best_r - lo.accept) / (hi.accept - lo.accept);
        policy.per_group.push_back(RandomizedThreshold::mixture(
            {{lo.threshold, 1.0 - lambda}, {hi.threshold, lambda}}));
    }
    return finish_report(dist, Regime::demographic_parity, std::move(policy), loss, 1e-9, {});
}

PolicyReport optimize_equal_opportunity(const ConditionalScoreDistribution& dist,
                                        const LossSpec& loss, SearchMethod method) {
    loss.validate();
    auto ctx = build_contexts(dist);
    const double w_fn = loss.cost_fn * dist.pr_outcome(1);

    // Cost of the cheapest per-group realization of a common tpr, convex in
    // the tpr.
    auto cost_at = [&](double nu) {
        double c = w_fn * (1.0 - nu);
        for (const auto& g : ctx) c += loss.cost_fp * g.n0 * min_fpr_at_tpr(g.region, nu);
        return c;
    };
    std::vector<double> breakpoints = {0.0, 1.0};
    for (const auto& g : ctx)
        for (const auto& v : g.region.boundary()) breakpoints.push_back(v.tpr);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    double nu = minimize_on_breakpoints(cost_at, breakpoints, method);

    RandomizedThresholdPolicy policy;
    for (GroupId a = 0; a < dist.num_groups(); ++a) {
        RatePoint target{min_fpr_at_tpr(ctx[a].region, nu), nu};
        policy.per_group.push_back(point_to_mixture(ctx[a].curve, target));
    }
    return finish_report(dist, Regime::equal_opportunity, std::move(policy), loss, 1e-6, {});
}

PolicyReport optimize_equalized_odds(const ConditionalScoreDistribution& dist,
                                     const LossSpec& loss, SearchMethod method) {
    loss.validate();
    auto ctx = build_contexts(dist);
    std::vector<FeasibleRegion> regions;
    regions.reserve(ctx.size());
    for (const auto& g : ctx) regions.push_back(g.region);
    FeasibleRegion inter = intersect_regions(regions);

    const double w_fp = loss.cost_fp * dist.pr_outcome(0);
    const double w_fn = loss.cost_fn * dist.pr_outcome(1);
    auto cost_at = [&](double x) { return w_fp * x + w_fn * (1.0 - inter.value(x)); };

    std::vector<double> breakpoints;
    breakpoints.reserve(inter.boundary().size());
    for (const auto& v : inter.boundary()) breakpoints.push_back(v.fpr);

    double x = minimize_on_breakpoints(cost_at, breakpoints, method);
    RatePoint target{x, inter.value(x)};

    RandomizedThresholdPolicy policy;
    for (GroupId a = 0; a < dist.num_groups(); ++a)
        policy.per_group.push_back(point_to_mixture(ctx[a].curve, target));
    return finish_report(dist, Regime::equalized_odds, std::move(policy), loss, 1e-6, {});
}

JointBinaryDistribution policy_adjusted_joint(const ConditionalScoreDistribution& dist,
                                              const RandomizedThresholdPolicy& policy) {
    const std::size_t k = dist.num_groups();
    if (policy.per_group.size() != k) throw StructureMismatchError("policy group count");
    std::vector<double> cells(k * 4, 0.0);
    for (GroupId a = 0; a < k; ++a) {
        RatePoint r = policy_rates(dist, a, policy.per_group[a]);
        double n0 = dist.pr_group_outcome(a, 0), n1 = dist.pr_group_outcome(a, 1);
        cells[a * 4 + 0] = n0 * (1.0 - r.fpr);
        cells[a * 4 + 1] = n1 * (1.0 - r.tpr);
        cells[a * 4 + 2] = n0 * r.fpr;
        cells[a * 4 + 3] = n1 * r.tpr;
    }
    return JointBinaryDistribution::from_cells(std::move(cells), dist.group_names());
}

PolicyReport optimize_regime(const ConditionalScoreDistribution& dist, const LossSpec& loss,
                             Regime regime) {
    switch (regime) {
        case Regime::max_profit: return optimize_max_profit(dist, loss);
        case Regime::group_blind: return optimize_group_blind(dist, loss);
        case Regime::demographic_parity: return optimize_demographic_parity(dist, loss);
        case Regime::equal_opportunity: return optimize_equal_opportunity(dist, loss);
        case Regime::equalized_odds: return optimize_equalized_odds(dist, loss);
    }
    throw Error("unknown regime");
}

}  // namespace fairpost

#include "fairpost/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fairpost {

namespace {

double cross(RatePoint o, RatePoint a, RatePoint b) {
    return (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr);
}

double dist2(RatePoint a, RatePoint b) {
    double dx = a.fpr - b.fpr, dy = a.tpr - b.tpr;
    return dx * dx + dy * dy;
}

double point_segment_dist(RatePoint p, RatePoint a, RatePoint b) {
    double vx = b.fpr - a.fpr, vy = b.tpr - a.tpr;
    double len2 = vx * vx + vy * vy;
    if (len2 <= 0.0) return std::sqrt(dist2(p, a));
    double t = ((p.fpr - a.fpr) * vx + (p.tpr - a.tpr) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    RatePoint proj{a.fpr + t * vx, a.tpr + t * vy};
    return std::sqrt(dist2(p, proj));
}

}  // namespace

ConvexPolygon ConvexPolygon::hull_of(std::span<const RatePoint> points) {
    std::vector<RatePoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](RatePoint a, RatePoint b) {
        return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) throw Error("hull of empty point set");
    if (pts.size() <= 2) return ConvexPolygon(std::move(pts));

    std::vector<RatePoint> hull;
    // Lower chain, then upper chain; collinear points are dropped.
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    std::size_t lower_size = hull.size() + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (hull.size() >= lower_size &&
               cross(hull[hull.size() - 2], hull.back(), *it) <= 0.0)
            hull.pop_back();
        hull.push_back(*it);
    }
    hull.pop_back();  // closing point duplicates the first
    if (hull.size() == 2 && hull[0] == hull[1]) hull.pop_back();
    return ConvexPolygon(std::move(hull));
}

double ConvexPolygon::area() const {
    if (verts_.size() < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const auto& a = verts_[i];
        const auto& b = verts_[(i + 1) % verts_.size()];
        s += a.fpr * b.tpr - b.fpr * a.tpr;
    }
    return 0.5 * s;
}

bool ConvexPolygon::contains(RatePoint p, double eps) const {
    if (verts_.size() == 1) return std::sqrt(dist2(p, verts_[0])) <= eps;
    if (verts_.size() == 2) return point_segment_dist(p, verts_[0], verts_[1]) <= eps;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const auto& a = verts_[i];
        const auto& b = verts_[(i + 1) % verts_.size()];
        double len = std::sqrt(dist2(a, b));
        if (len <= 0.0) continue;
        if (cross(a, b, p) < -eps * len) return false;
    }
    return true;
}

ConvexPolygon ConvexPolygon::clipped_to(const ConvexPolygon& clipper) const {
    if (verts_.size() < 3 || clipper.verts_.size() < 3)
        throw Error("clipped_to requires polygons with positive area");
    std::vector<RatePoint> out = verts_;
    for (std::size_t e = 0; e < clipper.verts_.size() && !out.empty(); ++e) {
        const RatePoint a = clipper.verts_[e];
        const RatePoint b = clipper.verts_[(e + 1) % clipper.verts_.size()];
        std::vector<RatePoint> in;
        in.swap(out);
        for (std::size_t i = 0; i < in.size(); ++i) {
            const RatePoint cur = in[i];
            const RatePoint nxt = in[(i + 1) % in.size()];
            double dc = cross(a, b, cur);
            double dn = cross(a, b, nxt);
            if (dc >= 0.0) out.push_back(cur);
            if ((dc >= 0.0) != (dn >= 0.0)) {
                double t = dc / (dc - dn);
                out.push_back({cur.fpr + t * (nxt.fpr - cur.fpr),
                               cur.tpr + t * (nxt.tpr - cur.tpr)});
            }
        }
    }
    if (out.empty()) throw Error("empty polygon intersection");
    return hull_of(out);
}

double ConvexPolygon::min_fpr_at_tpr(double tpr) const {
    double best = kInf;
    auto consider_edge = [&](RatePoint a, RatePoint b) {
        if ((a.tpr - tpr) * (b.tpr - tpr) > 0.0) return;
        if (a.tpr == b.tpr) {
            if (a.tpr == tpr) best = std::min({best, a.fpr, b.fpr});
            return;
        }
        double t = (tpr - a.tpr) / (b.tpr - a.tpr);
        if (t < 0.0 || t > 1.0) return;
        best = std::min(best, a.fpr + t * (b.fpr - a.fpr));
    };
    if (verts_.size() == 1) {
        if (verts_[0].tpr == tpr) return verts_[0].fpr;
    } else {
        for (std::size_t i = 0; i < verts_.size(); ++i)
            consider_edge(verts_[i], verts_[(i + 1) % verts_.size()]);
    }
    if (!std::isfinite(best)) throw Error("tpr height outside polygon range");
    return best;
}

ConvexPolygon binary_polytope(const JointBinaryDistribution& joint, GroupId a) {
    RatePoint g = joint.gamma(a);
    RatePoint flipped{1.0 - g.fpr, 1.0 - g.tpr};
    const RatePoint pts[4] = {{0.0, 0.0}, g, flipped, {1.0, 1.0}};
    return ConvexPolygon::hull_of(pts);
}

RocCurve conditional_roc(const ConditionalScoreDistribution& dist, GroupId a) {
    std::vector<double> support = dist.group_support(a);
    RocCurve curve;
    curve.points.push_back({kInf, {0.0, 0.0}});
    for (auto it = support.rbegin(); it != support.rend(); ++it) {
        RatePoint r{dist.tail(a, 0, *it), dist.tail(a, 1, *it)};
        if (r == curve.points.back().rates) continue;
        curve.points.push_back({*it, r});
    }
    if (!(curve.points.back().rates == RatePoint{1.0, 1.0}))
        curve.points.push_back({-kInf, {1.0, 1.0}});
    return curve;
}

FeasibleRegion FeasibleRegion::from_boundary(std::vector<RatePoint> boundary) {
    if (boundary.size() < 2) throw Error("boundary needs at least two vertices");
    // Snap the anchors exactly.
    if (std::fabs(boundary.front().fpr) > kConvexityEps ||
        std::fabs(boundary.front().tpr) > kConvexityEps)
        throw Error("boundary must start at (0,0)");
    if (std::fabs(boundary.back().fpr - 1.0) > kConvexityEps ||
        std::fabs(boundary.back().tpr - 1.0) > kConvexityEps)
        throw Error("boundary must end at (1,1)");
    boundary.front() = {0.0, 0.0};
    boundary.back() = {1.0, 1.0};
    // fpr is strictly increasing except for one allowed vertical rise at
    // fpr = 0 (a score separating some positives perfectly).
    for (std::size_t i = 0; i + 1 < boundary.size(); ++i) {
        bool vertical_at_origin = i == 0 && boundary[1].fpr == 0.0;
        if (!vertical_at_origin && !(boundary[i].fpr < boundary[i + 1].fpr))
            throw Error("boundary fpr values must be strictly increasing");
    }
    for (const auto& v : boundary)
        if (v.tpr < v.fpr - kFeasibilityEps) throw Error("boundary dips below the diagonal");
    for (std::size_t i = 1; i + 1 < boundary.size(); ++i)
        if (cross(boundary[i - 1], boundary[i], boundary[i + 1]) > kConvexityEps)
            throw Error("boundary is not concave");
    return FeasibleRegion(std::move(boundary));
}

double FeasibleRegion::value(double fpr) const {
    double x = std::clamp(fpr, 0.0, 1.0);
    // First vertex with fpr > x; the previous one is the segment's left end
    // (at x = 0 this picks the top of a vertical rise).
    auto it = std::upper_bound(verts_.begin(), verts_.end(), x,
                               [](double q, const RatePoint& v) { return q < v.fpr; });
    if (it == verts_.end()) return verts_.back().tpr;
    const RatePoint& lo = *(it - 1);
    if (lo.fpr == x) return lo.tpr;
    const RatePoint& hi = *it;
    double t = (x - lo.fpr) / (hi.fpr - lo.fpr);
    return lo.tpr + t * (hi.tpr - lo.tpr);
}

bool FeasibleRegion::contains(RatePoint p, double eps) const {
    if (p.fpr < -eps || p.fpr > 1.0 + eps) return false;
    if (p.tpr < p.fpr - eps) return false;
    return p.tpr <= value(p.fpr) + eps;
}

bool FeasibleRegion::is_diagonal(double eps) const {
    for (const auto& v : verts_)
        if (std::fabs(v.tpr - v.fpr) > eps) return false;
    return true;
}

namespace {

// Upper concave envelope of points sorted by nondecreasing fpr; ties on fpr
// keep the maximal tpr, except that the (0,0) anchor survives so a perfectly
// separated positive mass shows up as a vertical rise at fpr = 0. Collinear
// interior points are dropped.
std::vector<RatePoint> upper_envelope(std::vector<RatePoint> pts) {
    std::sort(pts.begin(), pts.end(), [](RatePoint a, RatePoint b) {
        return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
    });
    std::vector<RatePoint> dedup;
    dedup.push_back({0.0, 0.0});
    for (const auto& p : pts) {
        if (p.fpr == 0.0 && p.tpr == 0.0) continue;
        if (dedup.size() > 1 && dedup.back().fpr == p.fpr)
            dedup.back() = p;  // same fpr: later point has the larger tpr
        else
            dedup.push_back(p);
    }
    std::vector<RatePoint> hull;
    for (const auto& p : dedup) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

}  // namespace

FeasibleRegion achievable_region(const RocCurve& roc) {
    std::vector<RatePoint> pts;
    pts.reserve(roc.points.size() + 2);
    pts.push_back({0.0, 0.0});
    pts.push_back({1.0, 1.0});
    for (const auto& p : roc.points) pts.push_back(p.rates);
    return FeasibleRegion::from_boundary(upper_envelope(std::move(pts)));
}

namespace {

FeasibleRegion min_of_two(const FeasibleRegion& A, const FeasibleRegion& B) {
    std::vector<double> xs;
    for (const auto& v : A.boundary()) xs.push_back(v.fpr);
    for (const auto& v : B.boundary()) xs.push_back(v.fpr);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<RatePoint> pts = {{0.0, 0.0}};
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        double x0 = xs[k], x1 = xs[k + 1];
        double a0 = A.value(x0), b0 = B.value(x0);
        double a1 = A.value(x1), b1 = B.value(x1);
        pts.push_back({x0, std::min(a0, b0)});
        double d0 = a0 - b0, d1 = a1 - b1;
        if ((d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0)) {
            double t = d0 / (d0 - d1);
            double xc = x0 + t * (x1 - x0);
            double vc = a0 + t * (a1 - a0);
            if (xc > x0 && xc < x1) pts.push_back({xc, vc});
        }
    }
    pts.push_back({1.0, 1.0});
    return FeasibleRegion::from_boundary(upper_envelope(std::move(pts)));
}

}  // namespace

FeasibleRegion intersect_regions(std::span<const FeasibleRegion> regions) {
    if (regions.empty()) throw Error("intersect_regions needs at least one region");
    FeasibleRegion acc = regions[0];
    for (std::size_t i = 1; i < regions.size(); ++i) acc = min_of_two(acc, regions[i]);
    return acc;
}

RandomizedThreshold RandomizedThreshold::fixed(double t) {
    RandomizedThreshold rt;
    rt.comps_ = {{t, 1.0}};
    return rt;
}

RandomizedThreshold RandomizedThreshold::mixture(std::vector<Component> components) {
    if (components.empty()) throw Error("mixture needs at least one component");
    std::sort(components.begin(), components.end(),
              [](const Component& a, const Component& b) { return a.threshold > b.threshold; });
    std::vector<Component> merged;
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0)) throw Error("mixture weights must be positive");
        total += c.weight;
        if (!merged.empty() && merged.back().threshold == c.threshold)
            merged.back().weight += c.weight;
        else
            merged.push_back(c);
    }
    if (std::fabs(total - 1.0) > 1e-9) throw Error("mixture weights must sum to 1");
    for (auto& c : merged) c.weight /= total;
    RandomizedThreshold rt;
    rt.comps_ = std::move(merged);
    return rt;
}

RandomizedThreshold point_to_mixture(const RocCurve& roc, RatePoint target) {
    struct HullVertex {
        RatePoint p;
        double threshold;
    };
    // Upper envelope of the curve, keeping the realizing threshold per
    // vertex. The (0,0) anchor always survives (the curve starts there), so a
    // vertical rise at fpr = 0 is preserved.
    std::vector<HullVertex> hull;
    for (const auto& cp : roc.points) {
        HullVertex hv{cp.rates, cp.threshold};
        if (hull.size() > 1 && hull.back().p.fpr == hv.p.fpr) {
            if (hv.p.tpr < hull.back().p.tpr) continue;
            hull.pop_back();
        }
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2].p, hull.back().p, hv.p) >= 0.0)
            hull.pop_back();
        hull.push_back(hv);
    }

    auto boundary_at = [&](double x) {
        auto it = std::upper_bound(hull.begin(), hull.end(), x,
                                   [](double q, const HullVertex& v) { return q < v.p.fpr; });
        if (it == hull.end()) return hull.back().p.tpr;
        if (it == hull.begin()) return it->p.tpr;
        const auto& lo = *(it - 1);
        if (lo.p.fpr == x) return lo.p.tpr;
        const auto& hi = *it;
        double t = (x - lo.p.fpr) / (hi.p.fpr - lo.p.fpr);
        return lo.p.tpr + t * (hi.p.tpr - lo.p.tpr);
    };

    double bnd = boundary_at(std::clamp(target.fpr, 0.0, 1.0));
    if (target.fpr < -kFeasibilityEps || target.fpr > 1.0 + kFeasibilityEps ||
        target.tpr < target.fpr - kFeasibilityEps || target.tpr > bnd + kFeasibilityEps)
        throw InfeasibleTargetError(target.fpr, target.tpr);

    // On a curve point: a fixed threshold, no randomization.
    const RocPoint* nearest = nullptr;
    double nearest_d2 = kInf;
    for (const auto& cp : roc.points) {
        double d2 = dist2(cp.rates, target);
        if (d2 < nearest_d2) {
            nearest_d2 = d2;
            nearest = &cp;
        }
    }
    if (nearest && nearest_d2 <= kFeasibilityEps * kFeasibilityEps)
        return RandomizedThreshold::fixed(nearest->threshold);

    // On the upper boundary: mix the two adjacent hull thresholds that
    // bracket the target (the minimal-gap pair).
    if (std::fabs(target.tpr - bnd) <= kFeasibilityEps) {
        std::size_t i = 0;
        while (i + 2 < hull.size() && hull[i + 1].p.fpr <= target.fpr) ++i;
        const auto& lo = hull[i];
        const auto& hi = hull[i + 1];
        double lambda = std::clamp((target.fpr - lo.p.fpr) / (hi.p.fpr - lo.p.fpr), 0.0, 1.0);
        if (lambda <= 0.0) return RandomizedThreshold::fixed(lo.threshold);
        if (lambda >= 1.0) return RandomizedThreshold::fixed(hi.threshold);
        return RandomizedThreshold::mixture(
            {{lo.threshold, 1.0 - lambda}, {hi.threshold, lambda}});
    }

    // On the diagonal: a coin that ignores the score.
    if (std::fabs(target.tpr - target.fpr) <= kFeasibilityEps) {
        double p = std::clamp(0.5 * (target.fpr + target.tpr), 0.0, 1.0);
        if (p <= 0.0) return RandomizedThreshold::fixed(kInf);
        if (p >= 1.0) return RandomizedThreshold::fixed(-kInf);
        return RandomizedThreshold::mixture({{kInf, 1.0 - p}, {-kInf, p}});
    }

    // Strictly inside: fan triangulation from (0,0). Carathéodory gives a
    // three-threshold mixture reproducing the target exactly.
    for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
        const auto& u = hull[i].p;
        const auto& v = hull[i + 1].p;
        double det = u.fpr * v.tpr - v.fpr * u.tpr;
        if (std::fabs(det) < 1e-300) continue;
        double beta = (target.fpr * v.tpr - v.fpr * target.tpr) / det;
        double gamma = (u.fpr * target.tpr - target.fpr * u.tpr) / det;
        if (beta < -1e-12 || gamma < -1e-12 || beta + gamma > 1.0 + 1e-12) continue;
        beta = std::max(beta, 0.0);
        gamma = std::max(gamma, 0.0);
        double alpha = std::max(1.0 - beta - gamma, 0.0);
        std::vector<RandomizedThreshold::Component> comps;
        if (alpha > 1e-12) comps.push_back({hull[0].threshold, alpha});
        if (beta > 1e-12) comps.push_back({hull[i].threshold, beta});
        if (gamma > 1e-12) comps.push_back({hull[i + 1].threshold, gamma});
        double total = 0.0;
        for (const auto& c : comps) total += c.weight;
        for (auto& c : comps) c.weight /= total;
        if (comps.size() == 1) return RandomizedThreshold::fixed(comps[0].threshold);
        return RandomizedThreshold::mixture(std::move(comps));
    }
    throw InfeasibleTargetError(target.fpr, target.tpr);
}

}  // namespace fairpost

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fairpost/joint.hpp"
#include "fairpost/types.hpp"

namespace fairpost {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric tolerances: feasibility slack and convexity checks over at most
// ~1e6 support points in double precision.
inline constexpr double kFeasibilityEps = 1e-9;
inline constexpr double kConvexityEps = 1e-12;

/// Convex polygon in the (fpr, tpr) unit square, vertices counter-clockwise,
/// reduced (no duplicate or collinear vertices). A collinear point set reduces
/// to a 2-vertex segment, a single point to 1 vertex.
class ConvexPolygon {
public:
    static ConvexPolygon hull_of(std::span<const RatePoint> points);

    const std::vector<RatePoint>& vertices() const { return verts_; }
    bool is_segment() const { return verts_.size() == 2; }
    bool is_point() const { return verts_.size() == 1; }
    double area() const;
    bool contains(RatePoint p, double eps = kFeasibilityEps) const;

    /// Intersection with another polygon (both must have positive area).
    ConvexPolygon clipped_to(const ConvexPolygon& clipper) const;

    /// Smallest fpr attainable at the given tpr; requires the height to be
    /// within the polygon's tpr range.
    double min_fpr_at_tpr(double tpr) const;

private:
    explicit ConvexPolygon(std::vector<RatePoint> verts) : verts_(std::move(verts)) {}
    std::vector<RatePoint> verts_;
};

struct RocPoint {
    double threshold = 0.0;  // +/-inf sentinels encode the constant predictors
    RatePoint rates;
};

/// Group-conditional ROC curve: one point per distinct support threshold
/// under the strict R > t convention, endpoints included, sorted by strictly
/// decreasing threshold (so rates are nondecreasing along the list).
struct RocCurve {
    std::vector<RocPoint> points;
};

/// Rates achievable by randomized thresholding within one group: the region
/// between the main diagonal and a concave piecewise-linear upper boundary
/// anchored at (0,0) and (1,1).
class FeasibleRegion {
public:
    static FeasibleRegion from_boundary(std::vector<RatePoint> boundary);

    const std::vector<RatePoint>& boundary() const { return verts_; }
    double value(double fpr) const;  // max achievable tpr at this fpr
    bool contains(RatePoint p, double eps = kFeasibilityEps) const;
    bool is_diagonal(double eps = kConvexityEps) const;

private:
    explicit FeasibleRegion(std::vector<RatePoint> verts) : verts_(std::move(verts)) {}
    std::vector<RatePoint> verts_;
};

/// Randomized threshold: a small mixture over score thresholds, applied as
/// "draw T, predict R > T". One component is a fixed threshold; two components
/// are the classic low/high pair that randomizes in the gap; a third component
/// is needed to hit rate targets strictly inside the achievable region.
class RandomizedThreshold {
public:
    struct Component {
        double threshold = 0.0;
        double weight = 1.0;
    };

    static RandomizedThreshold fixed(double t);
    /// Components get sorted by decreasing threshold; weights must be
    /// positive and sum to 1 within 1e-9.
    static RandomizedThreshold mixture(std::vector<Component> components);

    const std::vector<Component>& components() const { return comps_; }
    bool is_fixed() const { return comps_.size() == 1; }
    bool is_two_point() const { return comps_.size() == 2; }

    double fixed_threshold() const { return comps_.front().threshold; }
    // Two-point accessors: the gap (t_lo, t_hi] accepts with probability p_lo.
    double t_lo() const { return comps_.back().threshold; }
    double t_hi() const { return comps_.front().threshold; }
    double p_lo() const { return comps_.back().weight; }

private:
    std::vector<Component> comps_;
};

/// Convex hull of {(0,0), gamma_a(pred), gamma_a(1-pred), (1,1)}: the rate
/// trade-offs reachable by predictors derived from a binary prediction within
/// group a.
ConvexPolygon binary_polytope(const JointBinaryDistribution& joint, GroupId a);

RocCurve conditional_roc(const ConditionalScoreDistribution& dist, GroupId a);

/// Upper concave hull of the curve's points, clipped above the diagonal.
FeasibleRegion achievable_region(const RocCurve& roc);

/// Pointwise minimum of the regions' upper boundaries.
FeasibleRegion intersect_regions(std::span<const FeasibleRegion> regions);

/// Decompose a feasible rate target into a randomized threshold over curve
/// points: a fixed threshold on a curve point, a two-point mixture on the
/// upper boundary or the diagonal, and a three-point mixture strictly inside.
/// Throws InfeasibleTargetError beyond 1e-9 slack.
RandomizedThreshold point_to_mixture(const RocCurve& roc, RatePoint target);

}  // namespace fairpost

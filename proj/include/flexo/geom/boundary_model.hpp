#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "flexo/geom/nurbs_curve.hpp"

namespace flexo::geom {

using Eigen::Matrix2d;
using Eigen::Vector2d;

/// Differential data of the boundary at one point: unit outward normal n,
/// unit tangent m (the 2D co-normal), tangential projector P = I - n n^T,
/// shape operator S = -grad_S n, mean curvature H = tr(S)/2, and the
/// second-order geometry tensor N~ = S - 2 H n n^T.
struct BoundaryFrame {
    Vector2d x = Vector2d::Zero();
    Vector2d n = Vector2d::Zero();
    Vector2d m = Vector2d::Zero();
    Matrix2d P = Matrix2d::Zero();
    Matrix2d S = Matrix2d::Zero();
    Matrix2d Ntilde = Matrix2d::Zero();
    double H = 0;
};

/// One side of a corner: co-normal m pointing out of the smooth portion and
/// that portion's outward normal.
struct CornerSide {
    Vector2d m = Vector2d::Zero();
    Vector2d n = Vector2d::Zero();
};

struct Corner {
    int chain = 0;
    int junction = 0;  // between segment `junction` and the next one
    Vector2d x = Vector2d::Zero();
    CornerSide incoming;  // from the segment ending here
    CornerSide outgoing;  // from the segment starting here
    std::string name;
};

struct BoundarySegment {
    NurbsCurve2D curve;
    std::string region;
};

struct BoundaryChain {
    std::vector<BoundarySegment> segments;
};

enum class PointClass { Inside, Outside, OnBoundary };

/// Portion of one boundary segment, in curve parameter space.
struct CurvePiece {
    int chain = 0;
    int segment = 0;
    double t0 = 0;
    double t1 = 0;
};

/// Overrides for automatic corner detection at chain junctions.
struct CornerOverride {
    int chain = 0;
    int junction = 0;
    bool is_corner = true;
    std::string name;
};

/// Closed chains of NURBS segments bounding the physical domain. Outer
/// chains are stored counterclockwise and holes clockwise (normalized at
/// construction), so the outward normal is always the tangent rotated by
/// -90 degrees. Immutable after construction; all queries are reentrant.
class BoundaryModel {
public:
    explicit BoundaryModel(std::vector<BoundaryChain> chains,
                           double corner_angle_tol = 1.0 * M_PI / 180.0,
                           const std::vector<CornerOverride>& overrides = {});

    int num_chains() const { return static_cast<int>(chains_.size()); }
    const BoundaryChain& chain(int c) const { return chains_[static_cast<size_t>(c)]; }
    const std::vector<Corner>& corners() const { return corners_; }

    const std::vector<std::string>& regions() const { return regions_; }
    int region_id(int chain, int segment) const;
    int region_id(const std::string& name) const;  // -1 if unknown

    void bbox(Vector2d& lo, Vector2d& hi) const { lo = lo_; hi = hi_; }
    double diameter() const { return (hi_ - lo_).norm(); }

    /// Frame from curve first and second derivatives. Throws on a
    /// degenerate (zero-tangent) parametrization.
    BoundaryFrame frame_at(int chain, int segment, double t) const;

    /// Ray-parity classification with a deterministic retry sequence of ray
    /// directions; points within tol of the boundary report OnBoundary.
    /// tol <= 0 selects the default 1e-12 * diameter.
    PointClass classify(const Vector2d& x, double tol = -1) const;

    /// Distance to the boundary (sampled bracket, locally refined).
    double distance(const Vector2d& x) const;

    /// Sub-intervals of all segments lying inside the closed box, split at
    /// box-edge crossings and at curve breakpoints.
    std::vector<CurvePiece> pieces_in_box(const Vector2d& lo, const Vector2d& hi) const;

    /// Total boundary length (Gauss per span; for diagnostics and tests).
    double perimeter() const;

private:
    void normalize_orientation();
    void detect_corners(double angle_tol, const std::vector<CornerOverride>& overrides);
    void build_samples();
    void refine_bbox();
    bool ray_parity(const Vector2d& x, const Vector2d& dir, bool& ok) const;

    std::vector<BoundaryChain> chains_;
    std::vector<Corner> corners_;
    std::vector<std::string> regions_;
    std::vector<std::vector<int>> region_of_;  // [chain][segment] -> region id
    Vector2d lo_ = Vector2d::Zero(), hi_ = Vector2d::Zero();
    // Dense polyline samples per chain/segment for distance estimates.
    struct Sample {
        double t;
        Vector2d x;
    };
    std::vector<std::vector<std::vector<Sample>>> samples_;
};

}  // namespace flexo::geom

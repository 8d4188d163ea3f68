#pragma once

// Curve and shape primitives: cubic Hermite member curves, rigid external
// surface shapes (circle / ellipse / rectangle inside a bounding circle),
// and the planar predicates used by candidate filtering and contact
// assignment.

#include <optional>
#include <vector>

#include "ccm/types.hpp"

namespace ccm {

/// A member skeleton curve.  End slopes are measured from the chord; the
/// tangent magnitude at both ends equals the chord length, so zero slopes
/// reproduce the straight segment exactly.
struct HermiteMember {
  Vec2 p0, p1;
  double tau0 = 0.0;
  double tau1 = 0.0;

  Vec2 point(double t) const;
  Vec2 tangent(double t) const;
  double chord_length() const { return (p1 - p0).norm(); }
  double chord_angle() const { return std::atan2(p1.y() - p0.y(), p1.x() - p0.x()); }
  /// Tangent direction angle at t=0 (equals chord angle + tau0).
  double start_angle() const { return chord_angle() + tau0; }
  /// Tangent direction angle at t=1 (equals chord angle + tau1).
  double end_angle() const { return chord_angle() + tau1; }
};

/// Sample the curve at n_el+1 points with equal arc-length spacing.
/// The first and last points equal p0 and p1 bit-for-bit.
/// Throws GeometryError for a degenerate (zero-chord) member.
std::vector<Vec2> hermite_polyline(const HermiteMember& m, int n_el);

enum class ShapeKind : int { Circle = 1, Ellipse = 2, Rectangle = 3 };

/// Raw genes of one external surface, before realization.
struct SurfaceGenes {
  ShapeKind kind = ShapeKind::Circle;
  Vec2 center{0, 0};
  double bound_radius = 0;  // v^R
  double f1 = 0, f2 = 0;    // size factors in [0.1, 1]
  double theta = 0;         // orientation, ignored for circles
};

/// A realized rigid external surface.  `a` and `b` are the derived sizes:
/// circle radius (a == b), ellipse semi-axes, or rectangle half-extents.
/// The boundary polyline is closed (first point not repeated) and
/// counter-clockwise.
struct SurfaceShape {
  int id = -1;  // original surface index in the design domain
  ShapeKind kind = ShapeKind::Circle;
  Vec2 center{0, 0};
  double bound_radius = 0;
  double theta = 0;
  double a = 0, b = 0;
  std::vector<Vec2> boundary;
};

// Boundary discretization of curved shapes.  128 segments keeps the
// polyline within ~3e-4 * radius of the true conic, comfortably inside the
// 1e-3 * radius contract of the contact projection checks.
inline constexpr int kCurvedBoundarySegments = 128;

/// Realize a surface from its genes: circle radius (f1+f2)/2 * R, ellipse
/// semi-axes f1*R and f2*R, rectangle extents 2*f1*R by 2*f2*R rescaled so
/// its corners stay within the bounding circle (shrink only, never grow).
SurfaceShape realize_surface(const SurfaceGenes& g);

/// Regenerate a shape boundary with a target maximum segment length
/// (applies to rectangles; curved shapes keep kCurvedBoundarySegments).
std::vector<Vec2> shape_boundary(const SurfaceShape& s, double max_seg_len);

/// True iff the two segments cross in their interiors or overlap
/// collinearly over more than `tol`.  A touch at shared endpoints (both
/// segments within `tol` of the same point) does not count.
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                        double tol);

/// Raw contact classification: 0 = none, 1 = single point (reported in
/// `where`), 2 = collinear overlap longer than tol.  Touches at endpoints
/// count as contact.
int segment_contact(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1, double tol,
                    Vec2* where);

/// Analytic, orientation-aware containment; boundary points count as inside.
bool shape_contains_point(const SurfaceShape& s, const Vec2& p);

/// True when the boundaries cross or one shape contains the other.
bool shapes_overlap(const SurfaceShape& s1, const SurfaceShape& s2, double tol);

/// Any-pair intersection test between two polylines (open or closed).
/// Point contacts within `tol` of an entry in `exclude` are ignored (the
/// shared skeleton vertices of adjacent members); collinear overlaps always
/// count.
bool polylines_intersect(const std::vector<Vec2>& a, bool a_closed, const std::vector<Vec2>& b,
                         bool b_closed, double tol, const std::vector<Vec2>& exclude = {});

double polygon_signed_area(const std::vector<Vec2>& poly);

/// Even-odd rule; points on the boundary may fall either way.
bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p);

/// Closest point on a closed polygon's boundary.
Vec2 closest_point_on_polygon(const std::vector<Vec2>& poly, const Vec2& p);

/// True iff the closed polygon has no self-intersections (shared
/// consecutive endpoints excluded).
bool polygon_is_simple(const std::vector<Vec2>& poly, double tol);

}  // namespace ccm

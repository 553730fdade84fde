// Elementary geometric subpredicates shared by cut, tear and drill.
//
// All predicates are pure and run in double precision. One relative epsilon
// (kRelativeEps x bounding-box diagonal) feeds every on-plane / tangency band
// so the three operations make mutually consistent decisions.
#pragma once

#include "msurg/types.hpp"

#include <optional>
#include <vector>

namespace msurg {

inline constexpr double kRelativeEps = 1e-9;

struct Plane {
    Vec3 normal;    // unit length
    double offset;  // plane is { x : normal . x == offset }

    double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }

    static Plane from_point_normal(const Vec3& point, const Vec3& normal);
};

struct DrillCylinder {
    Vec3 axis_start;
    Vec3 axis_end;
    double radius = 0.0;

    bool valid() const {
        return radius > 0.0 && (axis_end - axis_start).squaredNorm() > 0.0;
    }
};

enum class Side { Positive, Negative, OnPlane };

Side classify_point(const Vec3& p, const Plane& plane, double eps);

struct SegmentPlaneHit {
    double t = 0.0;  // parameter along p0 -> p1
    Vec3 point = Vec3::Zero();
};

// Intersection of the segment with the plane when the endpoints lie strictly
// on opposite sides. Same-side and coplanar segments yield nothing; callers
// route on-plane vertices through the Side::OnPlane path instead.
std::optional<SegmentPlaneHit> segment_plane_intersection(const Vec3& p0, const Vec3& p1,
                                                          const Plane& plane);

enum class CircleOverlap { Outside, Inside, Crossing };

// Face-versus-drill reduced to 2D triangle versus circle. Inside means all
// three vertices strictly inside the circle; Outside means the triangle and
// the closed disk are disjoint; everything else (including a triangle that
// fully contains the circle) is Crossing.
CircleOverlap triangle_circle_overlap_2d(const Vec2& a, const Vec2& b, const Vec2& c,
                                         const Vec2& center, double radius);

struct CircleHit {
    double t = 0.0;
    Vec2 point = Vec2::Zero();
};

// Parameter-sorted intersections of the open segment (0 < t < 1) with the
// circle. A tangency (discriminant within 1e-12) yields a single entry.
std::vector<CircleHit> segment_circle_intersection_2d(const Vec2& p0, const Vec2& p1,
                                                      const Vec2& center, double radius);

// Orthonormal frame on a plane; used by the drill to up-project the mesh
// along its axis and to restore stored axis coordinates on the way back.
struct PlaneFrame {
    Vec3 origin = Vec3::Zero();
    Vec3 u = Vec3::UnitX();
    Vec3 v = Vec3::UnitY();

    Vec3 normal() const { return u.cross(v); }

    Vec2 project(const Vec3& p) const {
        const Vec3 d = p - origin;
        return Vec2(d.dot(u), d.dot(v));
    }
    double height(const Vec3& p) const { return (p - origin).dot(normal()); }
    Vec3 unproject(const Vec2& q, double height) const {
        return origin + q.x() * u + q.y() * v + height * normal();
    }

    // Frame whose normal points from axis_start to axis_end. Basis choice is
    // deterministic so repeated runs emit identical meshes.
    static PlaneFrame from_axis(const Vec3& axis_start, const Vec3& axis_end);
};

// Distance from a point to a 2D segment.
double point_segment_distance_2d(const Vec2& p, const Vec2& a, const Vec2& b);

// Strictly-inside test allowing either triangle orientation.
bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace msurg

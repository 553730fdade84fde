#include "msurg/predicates.hpp"

#include <algorithm>
#include <cmath>

namespace msurg {

Plane Plane::from_point_normal(const Vec3& point, const Vec3& normal) {
    const Vec3 n = normal.normalized();
    return Plane{n, n.dot(point)};
}

Side classify_point(const Vec3& p, const Plane& plane, double eps) {
    const double s = plane.signed_distance(p);
    if (std::abs(s) <= eps) return Side::OnPlane;
    return s > 0.0 ? Side::Positive : Side::Negative;
}

std::optional<SegmentPlaneHit> segment_plane_intersection(const Vec3& p0, const Vec3& p1,
                                                          const Plane& plane) {
    const double s0 = plane.signed_distance(p0);
    const double s1 = plane.signed_distance(p1);
    if (!(s0 * s1 < 0.0)) return std::nullopt;
    const double t = s0 / (s0 - s1);
    return SegmentPlaneHit{t, p0 + t * (p1 - p0)};
}

double point_segment_distance_2d(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

namespace {
double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
}  // namespace

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    const double d0 = cross2(b - a, p - a);
    const double d1 = cross2(c - b, p - b);
    const double d2 = cross2(a - c, p - c);
    const bool has_neg = (d0 < 0.0) || (d1 < 0.0) || (d2 < 0.0);
    const bool has_pos = (d0 > 0.0) || (d1 > 0.0) || (d2 > 0.0);
    return !(has_neg && has_pos);
}

CircleOverlap triangle_circle_overlap_2d(const Vec2& a, const Vec2& b, const Vec2& c,
                                         const Vec2& center, double radius) {
    const double da = (a - center).norm();
    const double db = (b - center).norm();
    const double dc = (c - center).norm();
    if (da < radius && db < radius && dc < radius) return CircleOverlap::Inside;

    double dist;
    if (point_in_triangle_2d(center, a, b, c)) {
        dist = 0.0;
    } else {
        dist = std::min({point_segment_distance_2d(center, a, b),
                         point_segment_distance_2d(center, b, c),
                         point_segment_distance_2d(center, c, a)});
    }
    if (dist > radius) return CircleOverlap::Outside;
    return CircleOverlap::Crossing;
}

std::vector<CircleHit> segment_circle_intersection_2d(const Vec2& p0, const Vec2& p1,
                                                      const Vec2& center, double radius) {
    std::vector<CircleHit> hits;
    const Vec2 d = p1 - p0;
    const Vec2 m = p0 - center;
    const double a = d.squaredNorm();
    if (a == 0.0) return hits;
    const double b = 2.0 * m.dot(d);
    const double c = m.squaredNorm() - radius * radius;
    const double disc = b * b - 4.0 * a * c;

    auto push_if_open = [&](double t) {
        if (t > 0.0 && t < 1.0) hits.push_back(CircleHit{t, p0 + t * d});
    };

    if (std::abs(disc) <= 1e-12) {
        push_if_open(-b / (2.0 * a));
    } else if (disc > 0.0) {
        const double root = std::sqrt(disc);
        push_if_open((-b - root) / (2.0 * a));
        push_if_open((-b + root) / (2.0 * a));
    }
    return hits;
}

PlaneFrame PlaneFrame::from_axis(const Vec3& axis_start, const Vec3& axis_end) {
    const Vec3 n = (axis_end - axis_start).normalized();
    int least = 0;
    for (int k = 1; k < 3; ++k) {
        if (std::abs(n[k]) < std::abs(n[least])) least = k;
    }
    const Vec3 u = n.cross(Vec3::Unit(least)).normalized();
    const Vec3 v = n.cross(u);
    // (u, v, n) right-handed: u x v == n.
    PlaneFrame frame;
    frame.origin = axis_start;
    frame.u = u;
    frame.v = v;
    return frame;
}

}  // namespace msurg

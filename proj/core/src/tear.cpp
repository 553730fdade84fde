#include "msurg/tear.hpp"

#include "msurg/error.hpp"
#include "msurg/parallel.hpp"
#include "msurg/skinning.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <unordered_map>

namespace msurg {

namespace {

// Parameter along a->b where the segment pierces triangle (p0,p1,p2).
std::optional<double> segment_triangle_param(const Vec3& a, const Vec3& b, const Vec3& p0,
                                             const Vec3& p1, const Vec3& p2) {
    const Vec3 dir = b - a;
    const Vec3 e1 = p1 - p0, e2 = p2 - p0;
    const Vec3 pv = dir.cross(e2);
    const double det = e1.dot(pv);
    const double scale = e1.norm() * e2.norm();
    if (std::abs(det) <= 1e-14 * scale * dir.norm()) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 tv = a - p0;
    const double u = tv.dot(pv) * inv;
    if (u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
    const Vec3 qv = tv.cross(e1);
    const double v = dir.dot(qv) * inv;
    if (v < -1e-12 || u + v > 1.0 + 1e-12) return std::nullopt;
    const double t = e2.dot(qv) * inv;
    if (t < 0.0 || t > 1.0) return std::nullopt;
    return t;
}

struct SeamCrossing {
    int u = 0, v = 0;  // crossed edge, u on the positive side
    double t = 0.0;    // parameter from u toward v
    Vec3 point = Vec3::Zero();
    double proj = 0.0;      // along the entry->end axis
    int face_a = -1, face_b = -1;
    bool active = true;     // still inside the (possibly shrunk) window
    bool duplicated = false;
    int pos_id = -1, neg_id = -1, single_id = -1;
};

}  // namespace

TearPlaneResult derive_tear_plane(const SkinnedMesh& mesh, const ScalpelStroke& stroke) {
    double best_t = std::numeric_limits<double>::infinity();
    for (const Face& face : mesh.faces) {
        const auto t = segment_triangle_param(
            stroke.start_a, stroke.start_b, mesh.positions[static_cast<std::size_t>(face[0])],
            mesh.positions[static_cast<std::size_t>(face[1])],
            mesh.positions[static_cast<std::size_t>(face[2])]);
        if (t && *t < best_t) best_t = *t;
    }
    if (!std::isfinite(best_t))
        throw GeometryError("scalpel start segment does not intersect the mesh");
    TearPlaneResult result;
    result.entry_point = stroke.start_a + best_t * (stroke.start_b - stroke.start_a);

    const Vec3 ea = stroke.end_a - result.entry_point;
    const Vec3 eb = stroke.end_b - result.entry_point;
    const Vec3 n = ea.cross(eb);
    if (n.norm() <= 1e-12 * ea.norm() * eb.norm())
        throw GeometryError("tear plane is degenerate: entry point and scalpel end are collinear");
    const Vec3 unit = n.normalized();
    result.plane = Plane{unit, unit.dot(result.entry_point)};
    return result;
}

TearReport tear(SkinnedMesh& mesh, AdjacencyMaps& maps, const ScalpelStroke& stroke,
                const std::unordered_set<int>* forbidden_vertices) {
    const auto t0 = std::chrono::steady_clock::now();
    const TearPlaneResult derived = derive_tear_plane(mesh, stroke);
    TearReport report;
    report.plane = derived.plane;

    const double diag = mesh.bbox_diag();
    const double eps = kRelativeEps * diag;
    const Vec3 end_mid = 0.5 * (stroke.end_a + stroke.end_b);
    const Vec3 axis = end_mid - derived.entry_point;
    const double stroke_length = axis.norm();
    auto finish = [&](TearReport r) {
        r.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        return r;
    };
    if (stroke_length <= eps) return finish(std::move(report));
    const Vec3 axis_dir = axis / stroke_length;

    const int nv = mesh.vertex_count();
    std::vector<double> dist(static_cast<std::size_t>(nv));
    parallel_for(static_cast<std::size_t>(nv),
                 [&](std::size_t i) { dist[i] = derived.plane.signed_distance(mesh.positions[i]); });

    // Windowed strict crossings on interior (two-face) edges, in face-scan
    // discovery order.
    std::vector<SeamCrossing> seam;
    std::unordered_map<std::uint64_t, int> seen;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const Face& face = mesh.faces[static_cast<std::size_t>(f)];
        for (int k = 0; k < 3; ++k) {
            int u = face[k], v = face[(k + 1) % 3];
            const std::uint64_t key = edge_key(u, v);
            if (!seen.try_emplace(key, 1).second) continue;
            const double su = dist[static_cast<std::size_t>(u)];
            const double sv = dist[static_cast<std::size_t>(v)];
            if (!(su * sv < 0.0)) continue;
            auto it = maps.edge_to_faces.find(key);
            if (it == maps.edge_to_faces.end() || it->second.size() != 2) continue;
            SeamCrossing c;
            if (su < 0.0) std::swap(u, v);  // keep u on the positive side
            c.u = u;
            c.v = v;
            const double pu = dist[static_cast<std::size_t>(c.u)];
            const double pv = dist[static_cast<std::size_t>(c.v)];
            c.t = pu / (pu - pv);
            c.point = (1.0 - c.t) * mesh.positions[static_cast<std::size_t>(c.u)] +
                      c.t * mesh.positions[static_cast<std::size_t>(c.v)];
            c.proj = (c.point - derived.entry_point).dot(axis_dir);
            if (c.proj < -eps || c.proj > stroke_length + eps) continue;
            c.face_a = it->second[0];
            c.face_b = it->second[1];
            seam.push_back(c);
        }
    }
    if (seam.empty()) return finish(std::move(report));

    // A crossing opens only when both incident faces carry two windowed
    // crossings; otherwise it is a welded tip. A window with no tip at all is
    // a closed loop that would sever the mesh, so shrink it from the far end
    // until a tip appears.
    std::unordered_map<int, int> face_crossings;
    while (true) {
        face_crossings.clear();
        for (const SeamCrossing& c : seam)
            if (c.active) {
                ++face_crossings[c.face_a];
                ++face_crossings[c.face_b];
            }
        bool any_active = false, any_tip = false;
        for (SeamCrossing& c : seam) {
            if (!c.active) continue;
            any_active = true;
            c.duplicated = face_crossings[c.face_a] == 2 && face_crossings[c.face_b] == 2;
            if (!c.duplicated) any_tip = true;
        }
        if (!any_active || any_tip) break;
        int far = -1;
        for (std::size_t i = 0; i < seam.size(); ++i)
            if (seam[i].active && (far < 0 || seam[i].proj > seam[static_cast<std::size_t>(far)].proj))
                far = static_cast<int>(i);
        seam[static_cast<std::size_t>(far)].active = false;
    }

    bool any_duplicated = false;
    for (const SeamCrossing& c : seam) any_duplicated |= c.active && c.duplicated;
    if (!any_duplicated) return finish(std::move(report));

    if (forbidden_vertices)
        for (const SeamCrossing& c : seam)
            if (c.active && (forbidden_vertices->count(c.u) || forbidden_vertices->count(c.v)))
                throw GeometryError("tear rejected: seam touches previously torn geometry");

    const double opening =
        stroke.opening_fraction > 0.0 ? stroke.opening_fraction : 0.02 * diag;
    const Vec3 offset = 0.5 * opening * derived.plane.normal;

    MeshDelta delta;
    int next_id = nv;
    auto seam_delta_vertex = [&](const SeamCrossing& c, const Vec3& position) {
        DeltaVertex dv;
        dv.index = next_id++;
        dv.position = position;
        if (mesh.has_weights())
            dv.weights = interpolate_weights(mesh.weights[static_cast<std::size_t>(c.u)],
                                             mesh.weights[static_cast<std::size_t>(c.v)], c.t);
        if (mesh.has_uvs())
            dv.uv = (1.0 - c.t) * mesh.uvs[static_cast<std::size_t>(c.u)] +
                    c.t * mesh.uvs[static_cast<std::size_t>(c.v)];
        return dv;
    };
    std::unordered_map<std::uint64_t, int> crossing_of_edge;
    for (std::size_t i = 0; i < seam.size(); ++i) {
        SeamCrossing& c = seam[i];
        if (!c.active) continue;
        crossing_of_edge[edge_key(c.u, c.v)] = static_cast<int>(i);
        report.seam_points.push_back(c.point);
        if (c.duplicated) {
            c.pos_id = next_id;
            delta.added_vertices.push_back(seam_delta_vertex(c, c.point + offset));
            c.neg_id = next_id;
            delta.added_vertices.push_back(seam_delta_vertex(c, c.point - offset));
            report.duplicated_pairs.emplace_back(c.pos_id, c.neg_id);
        } else {
            c.single_id = next_id;
            delta.added_vertices.push_back(seam_delta_vertex(c, c.point));
        }
    }

    auto side_id = [&](const SeamCrossing& c, bool positive_side) {
        if (!c.duplicated) return c.single_id;
        return positive_side ? c.pos_id : c.neg_id;
    };
    auto crossing_on = [&](int u, int v) -> const SeamCrossing* {
        auto it = crossing_of_edge.find(edge_key(u, v));
        return it == crossing_of_edge.end() ? nullptr
                                            : &seam[static_cast<std::size_t>(it->second)];
    };

    for (int f = 0; f < mesh.face_count(); ++f) {
        const Face& face = mesh.faces[static_cast<std::size_t>(f)];
        const SeamCrossing* on_edge[3];
        int count = 0;
        for (int k = 0; k < 3; ++k) {
            on_edge[k] = crossing_on(face[k], face[(k + 1) % 3]);
            count += on_edge[k] != nullptr;
        }
        if (count == 0) continue;
        delta.removed_faces.push_back(f);
        if (count == 2) {
            // Rotate so the lone vertex a owns both crossed edges (a,b), (a,c).
            int lone = 0;
            for (int k = 0; k < 3; ++k)
                if (on_edge[k] && on_edge[(k + 2) % 3]) lone = k;
            const int a = face[lone], b = face[(lone + 1) % 3], c = face[(lone + 2) % 3];
            const SeamCrossing& cab = *crossing_on(a, b);
            const SeamCrossing& cac = *crossing_on(a, c);
            const bool a_positive = dist[static_cast<std::size_t>(a)] > 0.0;
            delta.added_faces.push_back({a, side_id(cab, a_positive), side_id(cac, a_positive)});
            const int o_ab = side_id(cab, !a_positive);
            const int o_ac = side_id(cac, !a_positive);
            const Vec3& pb = mesh.positions[static_cast<std::size_t>(b)];
            const Vec3& pc = mesh.positions[static_cast<std::size_t>(c)];
            if ((cab.point - pc).squaredNorm() <= (pb - cac.point).squaredNorm()) {
                delta.added_faces.push_back({o_ab, b, c});
                delta.added_faces.push_back({o_ab, c, o_ac});
            } else {
                delta.added_faces.push_back({o_ab, b, o_ac});
                delta.added_faces.push_back({b, c, o_ac});
            }
        } else {
            // One windowed crossing: split 1-to-2 through the welded point.
            int k = 0;
            while (!on_edge[k]) ++k;
            const int w = face[(k + 2) % 3], x = face[k], y = face[(k + 1) % 3];
            const SeamCrossing& c = *on_edge[k];
            const int mid = side_id(c, true);  // tips are single; side is moot
            delta.added_faces.push_back({w, x, mid});
            delta.added_faces.push_back({w, mid, y});
        }
    }

    validate_delta(mesh.vertex_count(), mesh.face_count(), delta);
    apply_delta(mesh, delta);
    apply_delta(maps, delta);
    report.delta = std::move(delta);
    return finish(std::move(report));
}

}  // namespace msurg

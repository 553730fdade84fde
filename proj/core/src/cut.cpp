#include "msurg/cut.hpp"

#include "msurg/parallel.hpp"
#include "msurg/skinning.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

namespace msurg {

namespace {

struct Crossing {
    int u = 0, v = 0;    // source edge, in first-encounter orientation
    double t = 0.0;      // parameter from u toward v
    Vec3 point = Vec3::Zero();
    int pos_id = -1, neg_id = -1;  // appended vertex ids, original index space
};

struct SideFace {
    Face tri;
    int source = -1;  // original face id, or -1 for a replacement triangle
};

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

}  // namespace

CutReport cut(const SkinnedMesh& mesh, const AdjacencyMaps& maps, const Plane& plane) {
    (void)maps;  // cut reads only the mesh; maps are patched by the caller via the delta
    const auto t0 = std::chrono::steady_clock::now();
    CutReport report;
    if (mesh.face_count() == 0) return report;

    const double eps = kRelativeEps * mesh.bbox_diag();
    const int nv = mesh.vertex_count();
    const int nf = mesh.face_count();

    // Logical perturbation: the on-plane band counts as Positive.
    std::vector<std::uint8_t> negative(static_cast<std::size_t>(nv));
    parallel_for(static_cast<std::size_t>(nv), [&](std::size_t i) {
        negative[i] = classify_point(mesh.positions[i], plane, eps) == Side::Negative;
    });

    std::vector<Crossing> crossings;
    std::unordered_map<std::uint64_t, int> crossing_of_edge;
    auto crossing_index = [&](int u, int v) {
        const std::uint64_t key = edge_key(u, v);
        auto it = crossing_of_edge.find(key);
        if (it != crossing_of_edge.end()) return it->second;
        const double su = plane.signed_distance(mesh.positions[static_cast<std::size_t>(u)]);
        const double sv = plane.signed_distance(mesh.positions[static_cast<std::size_t>(v)]);
        double t = su / (su - sv);
        t = std::clamp(t, 0.0, 1.0);
        Crossing c;
        c.u = u;
        c.v = v;
        c.t = t;
        c.point = (1.0 - t) * mesh.positions[static_cast<std::size_t>(u)] +
                  t * mesh.positions[static_cast<std::size_t>(v)];
        const int id = static_cast<int>(crossings.size());
        c.pos_id = nv + 2 * id;
        c.neg_id = nv + 2 * id + 1;
        crossings.push_back(c);
        crossing_of_edge.emplace(key, id);
        return id;
    };

    std::vector<SideFace> side_faces;
    side_faces.reserve(static_cast<std::size_t>(nf));
    bool any_positive = false, any_negative = false, any_straddle = false;

    for (int f = 0; f < nf; ++f) {
        const Face& face = mesh.faces[static_cast<std::size_t>(f)];
        const int neg = negative[static_cast<std::size_t>(face[0])] +
                        negative[static_cast<std::size_t>(face[1])] +
                        negative[static_cast<std::size_t>(face[2])];
        if (neg == 0 || neg == 3) {
            (neg == 0 ? any_positive : any_negative) = true;
            side_faces.push_back({face, f});
            continue;
        }
        any_straddle = any_positive = any_negative = true;
        // Rotate so vertex a sits alone on its side.
        int lone = 0;
        const bool lone_is_negative = (neg == 1);
        for (int k = 0; k < 3; ++k)
            if ((negative[static_cast<std::size_t>(face[static_cast<std::size_t>(k)])] != 0) ==
                lone_is_negative)
                lone = k;
        const int a = face[static_cast<std::size_t>(lone)];
        const int b = face[static_cast<std::size_t>((lone + 1) % 3)];
        const int c = face[static_cast<std::size_t>((lone + 2) % 3)];

        const int kab = crossing_index(a, b);
        const int kac = crossing_index(a, c);
        const Crossing& cab = crossings[static_cast<std::size_t>(kab)];
        const Crossing& cac = crossings[static_cast<std::size_t>(kac)];
        const int a_ab = lone_is_negative ? cab.neg_id : cab.pos_id;
        const int a_ac = lone_is_negative ? cac.neg_id : cac.pos_id;
        const int o_ab = lone_is_negative ? cab.pos_id : cab.neg_id;
        const int o_ac = lone_is_negative ? cac.pos_id : cac.neg_id;

        side_faces.push_back({{a, a_ab, a_ac}, -1});
        // Quad (p_ab, b, c, p_ac) split along its shorter diagonal.
        const Vec3& pb = mesh.positions[static_cast<std::size_t>(b)];
        const Vec3& pc = mesh.positions[static_cast<std::size_t>(c)];
        if ((cab.point - pc).squaredNorm() <= (pb - cac.point).squaredNorm()) {
            side_faces.push_back({{o_ab, b, c}, -1});
            side_faces.push_back({{o_ab, c, o_ac}, -1});
        } else {
            side_faces.push_back({{o_ab, b, o_ac}, -1});
            side_faces.push_back({{b, c, o_ac}, -1});
        }
    }

    for (const Crossing& c : crossings) report.intersection_points.push_back(c.point);
    report.intersection_count = static_cast<int>(crossings.size());

    if (!any_straddle && !(any_positive && any_negative)) {
        report.submeshes.push_back(mesh);
        report.delta_per_submesh.emplace_back();
        report.elapsed_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        return report;
    }

    // Connected components over the replacement face list; opposite sides
    // never share an edge, so components are side-pure by construction.
    const int total = static_cast<int>(side_faces.size());
    std::vector<int> parent(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) parent[static_cast<std::size_t>(i)] = i;
    {
        std::unordered_map<std::uint64_t, int> first_face_on_edge;
        for (int i = 0; i < total; ++i) {
            const Face& tri = side_faces[static_cast<std::size_t>(i)].tri;
            for (int k = 0; k < 3; ++k) {
                const std::uint64_t key = edge_key(tri[k], tri[(k + 1) % 3]);
                auto [it, inserted] = first_face_on_edge.try_emplace(key, i);
                if (!inserted)
                    parent[static_cast<std::size_t>(find_root(parent, i))] =
                        find_root(parent, it->second);
            }
        }
    }
    std::vector<int> component_of(static_cast<std::size_t>(total));
    std::vector<int> component_order;  // root -> first-appearance order
    std::unordered_map<int, int> component_id;
    for (int i = 0; i < total; ++i) {
        const int root = find_root(parent, i);
        auto [it, inserted] = component_id.try_emplace(root, static_cast<int>(component_order.size()));
        if (inserted) component_order.push_back(root);
        component_of[static_cast<std::size_t>(i)] = it->second;
    }
    const int ncomp = static_cast<int>(component_order.size());

    auto crossing_delta_vertex = [&](const Crossing& c, int index) {
        DeltaVertex dv;
        dv.index = index;
        dv.position = c.point;
        if (mesh.has_weights())
            dv.weights = interpolate_weights(mesh.weights[static_cast<std::size_t>(c.u)],
                                             mesh.weights[static_cast<std::size_t>(c.v)], c.t);
        if (mesh.has_uvs())
            dv.uv = (1.0 - c.t) * mesh.uvs[static_cast<std::size_t>(c.u)] +
                    c.t * mesh.uvs[static_cast<std::size_t>(c.v)];
        return dv;
    };

    for (int comp = 0; comp < ncomp; ++comp) {
        MeshDelta delta;
        std::vector<std::uint8_t> keep(static_cast<std::size_t>(nf), 0);
        std::vector<Face> new_faces;
        for (int i = 0; i < total; ++i) {
            if (component_of[static_cast<std::size_t>(i)] != comp) continue;
            const SideFace& sf = side_faces[static_cast<std::size_t>(i)];
            if (sf.source >= 0)
                keep[static_cast<std::size_t>(sf.source)] = 1;
            else
                new_faces.push_back(sf.tri);
        }
        for (int f = 0; f < nf; ++f)
            if (!keep[static_cast<std::size_t>(f)]) delta.removed_faces.push_back(f);

        // Renumber the appended vertices this component actually references.
        std::unordered_map<int, int> local_id;
        std::vector<int> used_appended;
        for (const Face& tri : new_faces)
            for (int corner : tri)
                if (corner >= nv && local_id.try_emplace(corner, 0).second)
                    used_appended.push_back(corner);
        std::sort(used_appended.begin(), used_appended.end());
        for (std::size_t i = 0; i < used_appended.size(); ++i) {
            const int original = used_appended[i];
            local_id[original] = nv + static_cast<int>(i);
            const Crossing& c = crossings[static_cast<std::size_t>((original - nv) / 2)];
            delta.added_vertices.push_back(crossing_delta_vertex(c, nv + static_cast<int>(i)));
        }
        for (Face tri : new_faces) {
            for (int& corner : tri)
                if (corner >= nv) corner = local_id[corner];
            delta.added_faces.push_back(tri);
        }

        SkinnedMesh sub = mesh;
        apply_delta(sub, delta);
        report.submeshes.push_back(compact_mesh(sub).mesh);
        report.delta_per_submesh.push_back(std::move(delta));
    }

    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace msurg

#include "msurg/drill.hpp"

#include "msurg/error.hpp"
#include "msurg/parallel.hpp"
#include "msurg/skinning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace msurg {

namespace {

constexpr int kMaxSubdivisionRounds = 8;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec3 barycentric_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    const double denom = cross2(b - a, c - a);
    const double beta = cross2(p - a, c - a) / denom;
    const double gamma = cross2(b - a, p - a) / denom;
    return Vec3(1.0 - beta - gamma, beta, gamma);
}

// Extends the input mesh; vertex/face indices live in the original+appended
// space so the composed delta falls straight out of a diff.
struct Work {
    std::vector<Vec3> pos;
    std::vector<Vec2> uv;
    std::vector<WeightSet> wt;
    std::vector<Vec2> q;  // projected 2D coordinates
    std::vector<Face> faces;
    std::vector<int> orig;  // original face id or -1
    std::vector<std::uint8_t> alive;
    bool has_uv = false, has_wt = false;
    PlaneFrame frame;

    int add_vertex(const Vec3& p, const Vec2& uv_in, WeightSet w) {
        pos.push_back(p);
        if (has_uv) uv.push_back(uv_in);
        if (has_wt) wt.push_back(std::move(w));
        q.push_back(frame.project(p));
        return static_cast<int>(pos.size()) - 1;
    }
    int add_face(const Face& f) {
        faces.push_back(f);
        orig.push_back(-1);
        alive.push_back(1);
        return static_cast<int>(faces.size()) - 1;
    }
};

// Midpoint-welded 1-to-4 split of the given live work faces.
void subdivide_work(Work& w, const std::vector<int>& face_ids) {
    std::unordered_map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
        const std::uint64_t key = edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
        WeightSet blend;
        if (w.has_wt) blend = interpolate_weights(w.wt[ia], w.wt[ib], 0.5);
        const Vec2 uv_mid = w.has_uv ? Vec2(0.5 * (w.uv[ia] + w.uv[ib])) : Vec2::Zero();
        const int id = w.add_vertex(0.5 * (w.pos[ia] + w.pos[ib]), uv_mid, std::move(blend));
        midpoint.emplace(key, id);
        return id;
    };
    for (int f : face_ids) {
        const Face face = w.faces[static_cast<std::size_t>(f)];
        const int mab = mid(face[0], face[1]);
        const int mbc = mid(face[1], face[2]);
        const int mca = mid(face[2], face[0]);
        w.alive[static_cast<std::size_t>(f)] = 0;
        w.add_face({face[0], mab, mca});
        w.add_face({mab, face[1], mbc});
        w.add_face({mca, mbc, face[2]});
        w.add_face({mab, mbc, mca});
    }
}

struct PtRef {
    Vec2 p;
    int id = -1;
    bool is_hit = false;
};

// Ear-clips a simple CCW polygon; flips the emitted winding back when the
// source face projected CW.
void ear_clip(std::vector<PtRef> poly, bool flipped, std::vector<Face>& out) {
    auto emit = [&](const PtRef& a, const PtRef& b, const PtRef& c) {
        if (flipped)
            out.push_back({a.id, c.id, b.id});
        else
            out.push_back({a.id, b.id, c.id});
    };
    while (poly.size() > 3) {
        const std::size_t n = poly.size();
        std::size_t ear = n;  // n = not found
        for (std::size_t i = 0; i < n && ear == n; ++i) {
            const PtRef& prev = poly[(i + n - 1) % n];
            const PtRef& cur = poly[i];
            const PtRef& next = poly[(i + 1) % n];
            if (cross2(cur.p - prev.p, next.p - cur.p) <= 0.0) continue;
            bool blocked = false;
            for (std::size_t j = 0; j < n && !blocked; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                blocked = point_in_triangle_2d(poly[j].p, prev.p, cur.p, next.p);
            }
            if (!blocked) ear = i;
        }
        if (ear == n) ear = 1;  // degenerate polygon: fall back to a fan step
        emit(poly[(ear + n - 1) % n], poly[ear], poly[(ear + 1) % n]);
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(ear));
    }
    if (poly.size() == 3) emit(poly[0], poly[1], poly[2]);
}

}  // namespace

MeshDelta subdivide_1to4(SkinnedMesh& mesh, AdjacencyMaps& maps,
                         const std::vector<int>& face_ids) {
    std::vector<int> ids = face_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int f : ids)
        if (f < 0 || f >= mesh.face_count())
            throw GeometryError("subdivide_1to4: face " + std::to_string(f) + " out of range");

    MeshDelta delta;
    delta.removed_faces = ids;
    int next_id = mesh.vertex_count();
    std::unordered_map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
        const std::uint64_t key = edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
        DeltaVertex dv;
        dv.index = next_id++;
        dv.position = 0.5 * (mesh.positions[ia] + mesh.positions[ib]);
        if (mesh.has_weights())
            dv.weights = interpolate_weights(mesh.weights[ia], mesh.weights[ib], 0.5);
        if (mesh.has_uvs()) dv.uv = 0.5 * (mesh.uvs[ia] + mesh.uvs[ib]);
        delta.added_vertices.push_back(dv);
        midpoint.emplace(key, dv.index);
        return dv.index;
    };
    for (int f : ids) {
        const Face& face = mesh.faces[static_cast<std::size_t>(f)];
        const int mab = mid(face[0], face[1]);
        const int mbc = mid(face[1], face[2]);
        const int mca = mid(face[2], face[0]);
        delta.added_faces.push_back({face[0], mab, mca});
        delta.added_faces.push_back({mab, face[1], mbc});
        delta.added_faces.push_back({mca, mbc, face[2]});
        delta.added_faces.push_back({mab, mbc, mca});
    }
    apply_delta(mesh, delta);
    apply_delta(maps, delta);
    return delta;
}

DrillReport drill(SkinnedMesh& mesh, AdjacencyMaps& maps, const DrillCylinder& cyl,
                  int min_contour_edges) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!cyl.valid()) throw GeometryError("drill cylinder is degenerate");
    if (min_contour_edges < 3) throw ScriptError("min_contour_edges must be >= 3");
    DrillReport report;
    auto finish = [&](DrillReport r) {
        r.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        return r;
    };
    if (mesh.face_count() == 0) return finish(std::move(report));

    Work w;
    w.frame = PlaneFrame::from_axis(cyl.axis_start, cyl.axis_end);
    w.pos = mesh.positions;
    w.uv = mesh.uvs;
    w.wt = mesh.weights;
    w.has_uv = mesh.has_uvs();
    w.has_wt = mesh.has_weights();
    w.faces = mesh.faces;
    w.orig.resize(w.faces.size());
    for (std::size_t i = 0; i < w.faces.size(); ++i) w.orig[i] = static_cast<int>(i);
    w.alive.assign(w.faces.size(), 1);
    w.q.resize(w.pos.size());
    parallel_for(w.pos.size(), [&](std::size_t i) { w.q[i] = w.frame.project(w.pos[i]); });

    const double r = cyl.radius;
    const Vec2 center = Vec2::Zero();  // axis_start projects to the frame origin

    std::vector<int> inside, crossing;
    auto classify_faces = [&] {
        inside.clear();
        crossing.clear();
        const std::size_t nf = w.faces.size();
        std::vector<std::uint8_t> cls(nf, 0);  // 0 outside, 1 inside, 2 crossing
        parallel_for(nf, [&](std::size_t f) {
            if (!w.alive[f]) return;
            const Face& face = w.faces[f];
            const Vec2& a = w.q[static_cast<std::size_t>(face[0])];
            const Vec2& b = w.q[static_cast<std::size_t>(face[1])];
            const Vec2& c = w.q[static_cast<std::size_t>(face[2])];
            const double lo_x = std::min({a.x(), b.x(), c.x()}), hi_x = std::max({a.x(), b.x(), c.x()});
            const double lo_y = std::min({a.y(), b.y(), c.y()}), hi_y = std::max({a.y(), b.y(), c.y()});
            if (lo_x > r || hi_x < -r || lo_y > r || hi_y < -r) return;  // bbox reject
            switch (triangle_circle_overlap_2d(a, b, c, center, r)) {
                case CircleOverlap::Inside: cls[f] = 1; break;
                case CircleOverlap::Crossing: cls[f] = 2; break;
                case CircleOverlap::Outside: break;
            }
        });
        for (std::size_t f = 0; f < nf; ++f) {
            if (cls[f] == 1) inside.push_back(static_cast<int>(f));
            if (cls[f] == 2) crossing.push_back(static_cast<int>(f));
        }
    };

    auto count_hits = [&] {
        std::unordered_map<std::uint64_t, int> per_edge;
        for (int f : crossing) {
            const Face& face = w.faces[static_cast<std::size_t>(f)];
            for (int k = 0; k < 3; ++k) {
                const std::uint64_t key = edge_key(face[k], face[(k + 1) % 3]);
                auto [it, fresh] = per_edge.try_emplace(key, 0);
                if (!fresh) continue;
                const int a = edge_key_first(key), b = edge_key_second(key);
                it->second = static_cast<int>(
                    segment_circle_intersection_2d(w.q[static_cast<std::size_t>(a)],
                                                   w.q[static_cast<std::size_t>(b)], center, r)
                        .size());
            }
        }
        int total = 0;
        for (const auto& [key, n] : per_edge) total += n;
        return total;
    };

    classify_faces();
    if (inside.empty() && crossing.empty()) return finish(std::move(report));

    int hits = count_hits();
    while (hits < min_contour_edges && !crossing.empty() &&
           report.subdivision_rounds < kMaxSubdivisionRounds) {
        subdivide_work(w, crossing);
        ++report.subdivision_rounds;
        classify_faces();
        hits = count_hits();
    }
    report.contour_quality_unmet = hits < min_contour_edges && !crossing.empty();

    // Commit: drop Inside faces, clip Crossing faces.
    for (int f : inside) w.alive[static_cast<std::size_t>(f)] = 0;
    report.removed_face_count = static_cast<int>(inside.size());

    struct EdgeHits {
        std::vector<CircleHit> hits;  // canonical min->max direction
        std::vector<int> ids;         // contour vertex ids, parallel
    };
    std::unordered_map<std::uint64_t, EdgeHits> contour_edges;
    std::vector<int> contour_ids;
    auto edge_data = [&](int a, int b) -> EdgeHits& {
        const std::uint64_t key = edge_key(a, b);
        auto [it, fresh] = contour_edges.try_emplace(key);
        if (!fresh) return it->second;
        const auto lo = static_cast<std::size_t>(edge_key_first(key));
        const auto hi = static_cast<std::size_t>(edge_key_second(key));
        it->second.hits = segment_circle_intersection_2d(w.q[lo], w.q[hi], center, r);
        for (const CircleHit& h : it->second.hits) {
            const double t = h.t;
            WeightSet blend;
            if (w.has_wt) blend = interpolate_weights(w.wt[lo], w.wt[hi], t);
            const Vec2 uv_mix =
                w.has_uv ? Vec2((1.0 - t) * w.uv[lo] + t * w.uv[hi]) : Vec2::Zero();
            const int id =
                w.add_vertex((1.0 - t) * w.pos[lo] + t * w.pos[hi], uv_mix, std::move(blend));
            it->second.ids.push_back(id);
            contour_ids.push_back(id);
        }
        return it->second;
    };

    std::vector<Face> pieces;
    for (int f : crossing) {
        const Face face = w.faces[static_cast<std::size_t>(f)];
        const Vec2& qa = w.q[static_cast<std::size_t>(face[0])];
        const Vec2& qb = w.q[static_cast<std::size_t>(face[1])];
        const Vec2& qc = w.q[static_cast<std::size_t>(face[2])];
        const bool flipped = cross2(qb - qa, qc - qa) < 0.0;
        const int order[3] = {0, flipped ? 2 : 1, flipped ? 1 : 2};

        // Boundary sequence: corners with the circle hits of each walked edge.
        std::vector<PtRef> seq;
        int hit_count = 0;
        for (int k = 0; k < 3; ++k) {
            const int vi = face[order[k]], vj = face[order[(k + 1) % 3]];
            seq.push_back({w.q[static_cast<std::size_t>(vi)], vi, false});
            EdgeHits& data = edge_data(vi, vj);
            if (data.hits.empty()) continue;
            if (vi <= vj) {
                for (std::size_t h = 0; h < data.hits.size(); ++h)
                    seq.push_back({data.hits[h].point, data.ids[h], true});
            } else {
                for (std::size_t h = data.hits.size(); h-- > 0;)
                    seq.push_back({data.hits[h].point, data.ids[h], true});
            }
            hit_count += static_cast<int>(data.hits.size());
        }
        // Grazing or vanished contact (including a face fully containing the
        // circle, which cannot be cut open without a bridge): keep the face.
        if (hit_count == 0 || hit_count % 2 != 0) continue;

        const std::size_t m = seq.size();
        bool outside = seq[0].p.norm() >= r;
        std::vector<std::size_t> exits;
        {
            bool state = outside;
            for (std::size_t i = 0; i < m; ++i)
                if (seq[i].is_hit) {
                    state = !state;
                    if (state) exits.push_back(i);
                }
        }
        pieces.clear();
        for (std::size_t start : exits) {
            std::vector<PtRef> poly;
            poly.push_back(seq[start]);
            std::size_t i = (start + 1) % m;
            while (!seq[i].is_hit) {
                poly.push_back(seq[i]);
                i = (i + 1) % m;
            }
            const PtRef& enter = seq[i];
            poly.push_back(enter);
            // Close the run with a clockwise arc through one inserted midpoint.
            const double phi_enter = std::atan2(enter.p.y(), enter.p.x());
            const double phi_exit = std::atan2(seq[start].p.y(), seq[start].p.x());
            double span = std::fmod(phi_enter - phi_exit, 2.0 * M_PI);
            if (span < 0.0) span += 2.0 * M_PI;
            const double phi_mid = phi_enter - 0.5 * span;
            const Vec2 arc2(r * std::cos(phi_mid), r * std::sin(phi_mid));
            const Vec3 bc = barycentric_2d(arc2, qa, qb, qc);
            const auto ia = static_cast<std::size_t>(face[0]);
            const auto ib = static_cast<std::size_t>(face[1]);
            const auto ic = static_cast<std::size_t>(face[2]);
            WeightSet blend;
            if (w.has_wt)
                blend = interpolate_weights_barycentric(w.wt[ia], w.wt[ib], w.wt[ic], bc.x(),
                                                        bc.y(), bc.z());
            const Vec2 uv_mix = w.has_uv
                                    ? Vec2(bc.x() * w.uv[ia] + bc.y() * w.uv[ib] + bc.z() * w.uv[ic])
                                    : Vec2::Zero();
            const int arc_id = w.add_vertex(
                bc.x() * w.pos[ia] + bc.y() * w.pos[ib] + bc.z() * w.pos[ic], uv_mix,
                std::move(blend));
            contour_ids.push_back(arc_id);
            poly.push_back({arc2, arc_id, true});
            ear_clip(std::move(poly), flipped, pieces);
        }
        w.alive[static_cast<std::size_t>(f)] = 0;
        ++report.removed_face_count;
        for (const Face& piece : pieces) w.add_face(piece);
    }

    // Compose the whole run into one delta against the input mesh.
    const int nv = mesh.vertex_count();
    const int nf = mesh.face_count();
    MeshDelta delta;
    {
        std::vector<std::uint8_t> survives(static_cast<std::size_t>(nf), 0);
        for (std::size_t i = 0; i < w.faces.size(); ++i)
            if (w.alive[i] && w.orig[i] >= 0) survives[static_cast<std::size_t>(w.orig[i])] = 1;
        for (int f = 0; f < nf; ++f)
            if (!survives[static_cast<std::size_t>(f)]) delta.removed_faces.push_back(f);
        for (int vtx = nv; vtx < static_cast<int>(w.pos.size()); ++vtx) {
            DeltaVertex dv;
            dv.index = vtx;
            dv.position = w.pos[static_cast<std::size_t>(vtx)];
            if (w.has_wt) dv.weights = w.wt[static_cast<std::size_t>(vtx)];
            if (w.has_uv) dv.uv = w.uv[static_cast<std::size_t>(vtx)];
            delta.added_vertices.push_back(dv);
        }
        for (std::size_t i = 0; i < w.faces.size(); ++i)
            if (w.alive[i] && w.orig[i] < 0) delta.added_faces.push_back(w.faces[i]);
    }
    if (delta.empty()) return finish(std::move(report));
    apply_delta(mesh, delta);
    apply_delta(maps, delta);

    report.contour_points.reserve(contour_ids.size());
    for (int id : contour_ids) report.contour_points.push_back(w.pos[static_cast<std::size_t>(id)]);
    report.delta = std::move(delta);
    return finish(std::move(report));
}

}  // namespace msurg

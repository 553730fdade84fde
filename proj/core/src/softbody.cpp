#include "msurg/softbody.hpp"

#include "msurg/error.hpp"
#include "msurg/parallel.hpp"
#include "msurg/skinning.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace msurg {

namespace {

struct CellKey {
    long long x, y, z;
    bool operator==(const CellKey&) const = default;
};
struct CellHash {
    std::size_t operator()(const CellKey& c) const {
        std::size_t h = std::hash<long long>()(c.x);
        h = h * 1000003u ^ std::hash<long long>()(c.y);
        h = h * 1000003u ^ std::hash<long long>()(c.z);
        return h;
    }
};

CellKey cell_of(const Vec3& p, double cell) {
    return {static_cast<long long>(std::floor(p.x() / cell)),
            static_cast<long long>(std::floor(p.y() / cell)),
            static_cast<long long>(std::floor(p.z() / cell))};
}

Vec3 member_mean(const std::vector<int>& members, const std::vector<Vec3>& positions) {
    Vec3 sum = Vec3::Zero();
    for (int v : members) sum += positions[static_cast<std::size_t>(v)];
    return sum / static_cast<double>(members.size());
}

void rebuild_vertex_index(Clustering& c, int vertex_count) {
    c.vertex_to_particles.assign(static_cast<std::size_t>(vertex_count), {});
    for (std::size_t p = 0; p < c.particles.size(); ++p)
        for (int v : c.particles[p].member_vertices)
            c.vertex_to_particles[static_cast<std::size_t>(v)].push_back(static_cast<int>(p));
}

}  // namespace

void SoftBodyParams::validate() const {
    if (stiffness <= 0.0) throw ScriptError("soft-body stiffness must be > 0");
    if (damping < 0.0) throw ScriptError("soft-body damping must be >= 0");
    if (dt <= 0.0) throw ScriptError("soft-body dt must be > 0");
    if (dt > 2.0 / std::sqrt(stiffness))
        throw ScriptError("soft-body dt violates the stability bound dt <= 2/sqrt(stiffness)");
}

Clustering cluster(const SkinnedMesh& mesh, double range) {
    if (range <= 0.0) throw ScriptError("cluster range must be > 0");
    if (mesh.vertex_count() == 0) throw GeometryError("cannot cluster an empty mesh");
    Clustering c;
    c.range = range;
    const int nv = mesh.vertex_count();

    std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
    for (int v = 0; v < nv; ++v)
        grid[cell_of(mesh.positions[static_cast<std::size_t>(v)], range)].push_back(v);

    const double range_sq = range * range;
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(nv), 0);
    for (int v = 0; v < nv; ++v) {
        if (covered[static_cast<std::size_t>(v)]) continue;
        const Vec3& seed_pos = mesh.positions[static_cast<std::size_t>(v)];
        Particle p;
        p.seed_vertex = v;
        const CellKey base = cell_of(seed_pos, range);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({base.x + dx, base.y + dy, base.z + dz});
                    if (it == grid.end()) continue;
                    for (int u : it->second)
                        if ((mesh.positions[static_cast<std::size_t>(u)] - seed_pos).squaredNorm() <=
                            range_sq)
                            p.member_vertices.push_back(u);
                }
        std::sort(p.member_vertices.begin(), p.member_vertices.end());
        for (int u : p.member_vertices) covered[static_cast<std::size_t>(u)] = 1;
        p.rest_center = member_mean(p.member_vertices, mesh.positions);
        p.position = p.rest_center;
        c.particles.push_back(std::move(p));
    }
    rebuild_vertex_index(c, nv);
    return c;
}

void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const MeshDelta& delta,
                       const std::vector<std::pair<int, int>>* tear_pairs) {
    const int nv = mesh_after.vertex_count();

    // A vertex with no incident face left counts as removed.
    std::vector<std::uint8_t> referenced(static_cast<std::size_t>(nv), 0);
    for (const Face& face : mesh_after.faces)
        for (int v : face) referenced[static_cast<std::size_t>(v)] = 1;

    for (Particle& p : clustering.particles) {
        const std::size_t before = p.member_vertices.size();
        std::erase_if(p.member_vertices,
                      [&](int v) { return !referenced[static_cast<std::size_t>(v)]; });
        if (!p.member_vertices.empty() && p.member_vertices.size() != before) {
            const Vec3 fresh = member_mean(p.member_vertices, mesh_after.positions);
            p.position += fresh - p.rest_center;
            p.rest_center = fresh;
        }
    }
    std::erase_if(clustering.particles,
                  [](const Particle& p) { return p.member_vertices.empty(); });

    std::unordered_set<int> left, right;
    if (tear_pairs)
        for (const auto& [l, r] : *tear_pairs) {
            left.insert(l);
            right.insert(r);
        }
    auto holds_any = [](const std::vector<int>& members, const std::unordered_set<int>& set) {
        if (set.empty()) return false;
        for (int v : members)
            if (set.count(v)) return true;
        return false;
    };

    const double range_sq = clustering.range * clustering.range;
    for (const DeltaVertex& dv : delta.added_vertices) {
        const int v = dv.index;
        if (!referenced[static_cast<std::size_t>(v)]) continue;
        const Vec3& pos = mesh_after.positions[static_cast<std::size_t>(v)];
        const std::unordered_set<int>* blocked = nullptr;
        if (left.count(v)) blocked = &right;
        if (right.count(v)) blocked = &left;

        bool joined = false;
        int nearest = -1;
        double nearest_sq = 0.0;
        for (std::size_t pi = 0; pi < clustering.particles.size(); ++pi) {
            Particle& p = clustering.particles[pi];
            if (blocked && holds_any(p.member_vertices, *blocked)) continue;
            const double d_sq =
                (mesh_after.positions[static_cast<std::size_t>(p.seed_vertex)] - pos).squaredNorm();
            if (nearest < 0 || d_sq < nearest_sq) {
                nearest = static_cast<int>(pi);
                nearest_sq = d_sq;
            }
            if (d_sq > range_sq) continue;
            p.member_vertices.insert(
                std::lower_bound(p.member_vertices.begin(), p.member_vertices.end(), v), v);
            const Vec3 fresh = member_mean(p.member_vertices, mesh_after.positions);
            p.position += fresh - p.rest_center;
            p.rest_center = fresh;
            joined = true;
        }
        if (joined) continue;
        // Coverage fallback: nearest admissible particle, else a fresh seed
        // (the one case where the particle count can grow).
        if (nearest >= 0) {
            Particle& p = clustering.particles[static_cast<std::size_t>(nearest)];
            p.member_vertices.insert(
                std::lower_bound(p.member_vertices.begin(), p.member_vertices.end(), v), v);
            const Vec3 fresh = member_mean(p.member_vertices, mesh_after.positions);
            p.position += fresh - p.rest_center;
            p.rest_center = fresh;
        } else {
            Particle p;
            p.seed_vertex = v;
            p.member_vertices = {v};
            p.rest_center = p.position = pos;
            clustering.particles.push_back(std::move(p));
        }
    }
    rebuild_vertex_index(clustering, nv);
}

void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const CutReport& report, int submesh_index) {
    if (submesh_index < 0 ||
        submesh_index >= static_cast<int>(report.delta_per_submesh.size()))
        throw GeometryError("cut submesh index out of range");
    update_clustering(clustering, mesh_after,
                      report.delta_per_submesh[static_cast<std::size_t>(submesh_index)]);
}

void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const TearReport& report) {
    update_clustering(clustering, mesh_after, report.delta, &report.duplicated_pairs);
}

void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const DrillReport& report) {
    update_clustering(clustering, mesh_after, report.delta);
}

void apply_impulse(Clustering& clustering, const Vec3& contact_point, const Vec3& force,
                   double radius, double dt) {
    if (radius <= 0.0) throw ScriptError("impulse radius must be > 0");
    const double radius_sq = radius * radius;
    for (Particle& p : clustering.particles)
        if ((p.position - contact_point).squaredNorm() <= radius_sq) p.velocity += force * dt;
}

std::vector<Vec3> step(Clustering& clustering, const SkinnedMesh& mesh, const Pose* pose,
                       const SoftBodyParams& params) {
    params.validate();
    if (pose && !mesh.has_weights())
        throw GeometryError("posed step requires a mesh with weights");

    const std::size_t np = clustering.particles.size();
    std::vector<Vec3> offset(np);  // particle position minus its target
    parallel_for(np, [&](std::size_t i) {
        Particle& p = clustering.particles[i];
        const Vec3 target =
            pose ? skin_point(p.rest_center,
                              mesh.weights[static_cast<std::size_t>(p.seed_vertex)], *pose)
                 : p.rest_center;
        p.velocity += (-params.stiffness * (p.position - target) - params.damping * p.velocity) *
                      params.dt;
        p.position += p.velocity * params.dt;
        offset[i] = p.position - target;
    });

    std::vector<Vec3> out = pose ? apply_pose(mesh, *pose) : mesh.positions;
    parallel_for(out.size(), [&](std::size_t v) {
        const auto& owners = clustering.vertex_to_particles[v];
        if (owners.empty()) return;
        Vec3 mean = Vec3::Zero();
        for (int p : owners) mean += offset[static_cast<std::size_t>(p)];
        out[v] += mean / static_cast<double>(owners.size());
    });
    return out;
}

Clustering make_uniform_clustering(const SkinnedMesh& mesh, int particle_count,
                                   int members_per_particle) {
    const int nv = mesh.vertex_count();
    if (nv == 0 || particle_count < 1 || members_per_particle < 1)
        throw ScriptError("uniform clustering needs a mesh and positive counts");
    Clustering c;
    c.range = mesh.bbox_diag();
    for (int i = 0; i < particle_count; ++i) {
        Particle p;
        const int start = static_cast<int>(
            static_cast<long long>(i) * nv / particle_count);
        p.seed_vertex = start;
        const int take = std::min(members_per_particle, nv);
        p.member_vertices.reserve(static_cast<std::size_t>(take));
        for (int k = 0; k < take; ++k) p.member_vertices.push_back((start + k) % nv);
        std::sort(p.member_vertices.begin(), p.member_vertices.end());
        p.rest_center = member_mean(p.member_vertices, mesh.positions);
        p.position = p.rest_center;
        c.particles.push_back(std::move(p));
    }
    rebuild_vertex_index(c, nv);
    return c;
}

}  // namespace msurg

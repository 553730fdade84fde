// Particle clustering over mesh vertices, cluster maintenance across
// surgeries, and elastic deformation stepping.
//
// Clustering is greedy in vertex-index order: the first uncovered vertex
// seeds a particle that absorbs every vertex within range (multi-membership
// allowed). Updates after a surgery drop unreferenced vertices, enrol new
// ones into in-range particles (never across a tear seam), and delete
// emptied particles. Integration is semi-implicit Euler with unit particle
// mass and an enforced stability bound dt <= 2/sqrt(stiffness).
#pragma once

#include "msurg/adjacency.hpp"
#include "msurg/cut.hpp"
#include "msurg/drill.hpp"
#include "msurg/mesh.hpp"
#include "msurg/tear.hpp"

#include <utility>
#include <vector>

namespace msurg {

struct Particle {
    int seed_vertex = 0;
    std::vector<int> member_vertices;  // sorted, unique
    Vec3 rest_center = Vec3::Zero();   // mean of member rest positions
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
};

struct Clustering {
    std::vector<Particle> particles;
    std::vector<std::vector<int>> vertex_to_particles;  // per vertex, sorted particle ids
    double range = 0.0;
};

struct SoftBodyParams {
    double stiffness = 40.0;  // 1/s^2, pull toward the target center
    double damping = 4.0;     // 1/s
    double dt = 1.0 / 90.0;   // s, VR frame cadence

    void validate() const;  // throws ScriptError outside the stability bound
};

Clustering cluster(const SkinnedMesh& mesh, double range);

// Applies one surgery delta to the clustering: vertices left without any
// incident face drop out of their particles, added vertices join every
// particle whose seed is in range (falling back to the nearest admissible
// particle, or a fresh seed, so coverage never breaks), emptied particles
// are deleted. tear_pairs forbids any particle from holding vertices of
// both seam sides. mesh_after is the mesh with the delta already applied.
void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const MeshDelta& delta,
                       const std::vector<std::pair<int, int>>* tear_pairs = nullptr);

void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const CutReport& report, int submesh_index);
void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const TearReport& report);
void update_clustering(Clustering& clustering, const SkinnedMesh& mesh_after,
                       const DrillReport& report);

// Unit mass: every particle whose current position lies within radius of the
// contact point gains velocity force * dt.
void apply_impulse(Clustering& clustering, const Vec3& contact_point, const Vec3& force,
                   double radius, double dt);

// One integration step. Targets are rest centers skinned through the pose by
// the seed vertex's weights (identity/no pose keeps rest centers). Returns
// the displaced vertex positions: skinned rest position plus the mean
// particle offset; at rest this is exactly the skinned positions.
std::vector<Vec3> step(Clustering& clustering, const SkinnedMesh& mesh, const Pose* pose,
                       const SoftBodyParams& params);

// Benchmark scaffolding: particle_count particles over evenly spaced blocks
// of members_per_particle consecutive vertices (wrapping), so step cost is
// proportional to the particle count on a fixed mesh.
Clustering make_uniform_clustering(const SkinnedMesh& mesh, int particle_count,
                                   int members_per_particle);

}  // namespace msurg

// Skinned triangle mesh representation, validation, duplicate-vertex
// removal and file I/O.
//
// Meshes are plain values: operations return new meshes instead of mutating
// shared state, so read-only sharing across threads is safe.
#pragma once

#include "msurg/types.hpp"
#include "msurg/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace msurg {

struct SkinnedMesh {
    std::vector<Vec3> positions;
    std::vector<Vec2> uvs;           // empty, or parallel to positions
    std::vector<Face> faces;         // CCW vertex-index triples
    std::vector<WeightSet> weights;  // empty, or parallel to positions
    int bone_count = 0;

    bool has_uvs() const { return !uvs.empty(); }
    bool has_weights() const { return !weights.empty(); }
    int vertex_count() const { return static_cast<int>(positions.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    double bbox_diag() const { return bbox_diagonal(positions); }
};

struct BoneTransform {
    Quat rotation = Quat::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    static BoneTransform identity() { return {}; }
};

struct Pose {
    std::vector<BoneTransform> bones;

    static Pose identity(int bone_count) {
        return Pose{std::vector<BoneTransform>(static_cast<std::size_t>(bone_count))};
    }
};

struct MeshStats {
    int vertex_count = 0;
    int face_count = 0;
    int edge_count = 0;
    int boundary_edge_count = 0;
    int connected_components = 0;  // components of the face graph
    double total_area = 0.0;
};

// Throws GeometryError when a type invariant is broken (index out of range,
// degenerate face, non-normalized weights, dangling uv array).
void validate_mesh(const SkinnedMesh& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double total_area(const SkinnedMesh& mesh);

// Scale-invariant default merge tolerance: 1e-6 x bounding-box diagonal.
double default_merge_tolerance(const SkinnedMesh& mesh);

struct DuplicateRemoval {
    SkinnedMesh mesh;
    std::vector<int> remap;  // old vertex index -> new vertex index
};

// Welds vertices closer than tol (Euclidean) via a spatial hash grid with
// cell size tol. The lowest-index vertex of each merge group survives and
// keeps its own uv/weights; faces collapsing below 3 distinct indices are
// dropped. tol == 0 merges exact duplicates only.
DuplicateRemoval remove_duplicates(const SkinnedMesh& mesh, double tol);

// All counts recomputed from scratch; components via shared-edge flood fill.
MeshStats mesh_stats(const SkinnedMesh& mesh);

struct CompactResult {
    SkinnedMesh mesh;
    std::vector<int> source_vertex;  // new index -> old index
};

// Drops vertices not referenced by any face, preserving vertex order.
CompactResult compact_mesh(const SkinnedMesh& mesh);

// Wavefront-style ASCII mesh (v/vt/f lines, 1-based indices, triangles
// only). Weights ride in a sidecar at <path>.weights; load picks the sidecar
// up automatically when no explicit weights path is given.
SkinnedMesh load_mesh(const std::string& path,
                      const std::optional<std::string>& weights_path = std::nullopt);
void save_mesh(const SkinnedMesh& mesh, const std::string& path);

// Pose file: `bones N` header then one `b <index> <qw> <qx> <qy> <qz>
// <tx> <ty> <tz>` record per bone.
Pose load_pose(const std::string& path);
void save_pose(const Pose& pose, const std::string& path);

}  // namespace msurg

// Vertex-neighbour and face-neighbour tables, built once at import and
// patched incrementally from each operation's delta.
//
// Patching follows a canonical application order shared with the mesh side:
//   1. removed faces in descending pre-op id order, each a swap-remove with
//      the current last face;
//   2. vertex appends;
//   3. face appends in list order.
// Applying the same delta to mesh and maps therefore keeps face ids aligned,
// and a patched table equals a from-scratch rebuild of the patched mesh.
#pragma once

#include "msurg/mesh.hpp"
#include "msurg/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace msurg {

struct DeltaVertex {
    int index = 0;  // must equal pre-op vertex count + position in the list
    Vec3 position = Vec3::Zero();
    WeightSet weights;
    std::optional<Vec2> uv;
};

struct MeshDelta {
    std::vector<DeltaVertex> added_vertices;
    std::vector<int> removed_faces;  // pre-op face ids, ascending, unique
    std::vector<Face> added_faces;   // may reference added vertices

    bool empty() const {
        return added_vertices.empty() && removed_faces.empty() && added_faces.empty();
    }
    // Element count, the |delta| used by the patch-cost bound.
    std::size_t size() const {
        return added_vertices.size() + removed_faces.size() + added_faces.size();
    }
};

struct AdjacencyMaps {
    std::vector<std::vector<int>> vertex_neighbors;  // sorted adjacent vertex ids
    std::vector<std::vector<int>> face_neighbors;    // sorted edge-adjacent face ids
    std::unordered_map<std::uint64_t, std::vector<int>> edge_to_faces;  // sorted face lists
    std::vector<Face> face_vertices;  // face -> vertex triple snapshot
    std::vector<std::string> warnings;  // non-manifold edges, noted not fatal

    // Container-entry modifications performed by the last apply_delta call.
    std::size_t last_patch_touches = 0;

    int vertex_count() const { return static_cast<int>(vertex_neighbors.size()); }
    int face_count() const { return static_cast<int>(face_vertices.size()); }
};

AdjacencyMaps build_adjacency(const SkinnedMesh& mesh);

// Throws GeometryError naming the offending index when the delta does not
// fit the given mesh dimensions.
void validate_delta(int vertex_count, int face_count, const MeshDelta& delta);

// In-place patch; cost proportional to |delta|, not to mesh size.
void apply_delta(AdjacencyMaps& maps, const MeshDelta& delta);

// Mesh-side application of the same canonical order.
void apply_delta(SkinnedMesh& mesh, const MeshDelta& delta);

// Structural equality after canonical sorting; warnings are not compared.
bool maps_equal(const AdjacencyMaps& a, const AdjacencyMaps& b);

}  // namespace msurg

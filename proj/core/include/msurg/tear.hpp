// Scalpel tear: bounded seam along a plane, duplicated and opened by a
// normal offset, leaving the mesh one piece.
//
// The tear plane spans the stroke's entry point (first hit of the start
// segment on the surface) and the end segment's endpoints. Edge crossings
// are filtered to the window [0, stroke length] along the entry->end axis;
// a windowed crossing is duplicated only when both incident faces carry two
// windowed crossings, so the seam's end crossings stay welded and the mesh
// stays connected. Crossings on boundary edges never join the seam. If the
// window closes into a loop (no welded tip anywhere), the farthest crossing
// is dropped until a tip appears.
#pragma once

#include "msurg/adjacency.hpp"
#include "msurg/mesh.hpp"
#include "msurg/predicates.hpp"

#include <unordered_set>
#include <utility>

namespace msurg {

struct ScalpelStroke {
    Vec3 start_a = Vec3::Zero(), start_b = Vec3::Zero();  // tool at stroke start
    Vec3 end_a = Vec3::Zero(), end_b = Vec3::Zero();      // tool at stroke end
    // Absolute gap between the two seam sides, along the unit normal.
    // <= 0 picks the default, 0.02 x bounding-box diagonal.
    double opening_fraction = 0.0;
};

struct TearPlaneResult {
    Plane plane;
    Vec3 entry_point = Vec3::Zero();
};

// Entry point = first intersection of the start segment with any face
// (smallest segment parameter); plane spans entry + the end segment's
// endpoints, normal by right-hand rule of those three points. Throws
// GeometryError when the start segment misses or the points are collinear.
TearPlaneResult derive_tear_plane(const SkinnedMesh& mesh, const ScalpelStroke& stroke);

struct TearReport {
    Plane plane;
    std::vector<Vec3> seam_points;                  // windowed crossings, pre-duplication
    std::vector<std::pair<int, int>> duplicated_pairs;  // (positive side, negative side)
    double elapsed_ms = 0.0;
    MeshDelta delta;
};

// Tears mesh and maps in place (both patched through the returned delta).
// An empty seam is a no-op with an empty report. When forbidden_vertices is
// given, a seam touching any listed vertex is rejected with GeometryError;
// the scene feeds it the vertices of previous tears, since tearing already
// torn geometry is unsupported.
TearReport tear(SkinnedMesh& mesh, AdjacencyMaps& maps, const ScalpelStroke& stroke,
                const std::unordered_set<int>* forbidden_vertices = nullptr);

}  // namespace msurg

// Cylindrical drill: project along the axis, classify faces against the 2D
// circle, remove the interior, re-triangulate the contour, down-project.
//
// When the to-be-created contour would have fewer than min_contour_edges
// circle-edge intersections, every Crossing face is split 1-to-4 through its
// edge midpoints and the count re-checked, up to 8 rounds. Clipping walks
// each Crossing face's boundary in 2D, closes every outside run with a
// clockwise circle arc carrying one inserted arc midpoint, and ear-clips the
// resulting polygons. New vertices take barycentric weights and positions on
// the original surface, so the rim follows the mesh.
#pragma once

#include "msurg/adjacency.hpp"
#include "msurg/mesh.hpp"
#include "msurg/predicates.hpp"

namespace msurg {

struct DrillReport {
    std::vector<Vec3> contour_points;  // hole-rim vertices (edge hits + arc midpoints)
    int removed_face_count = 0;        // faces deleted or replaced by the clip
    int subdivision_rounds = 0;
    bool contour_quality_unmet = false;  // recursion cap hit below the threshold
    double elapsed_ms = 0.0;
    MeshDelta delta;  // composed over all subdivision rounds plus the clip
};

// Drills mesh and maps in place through the composed delta. A drill missing
// every face is a no-op with an empty report. Vertices orphaned by the
// removal stay in the mesh (deltas never delete vertices); compact_mesh
// drops them when a caller wants a tight mesh.
DrillReport drill(SkinnedMesh& mesh, AdjacencyMaps& maps, const DrillCylinder& cyl,
                  int min_contour_edges = 10);

// Splits each listed face into 4 through welded edge midpoints; midpoint
// weights average the edge endpoints. Returns the applied delta.
MeshDelta subdivide_1to4(SkinnedMesh& mesh, AdjacencyMaps& maps, const std::vector<int>& face_ids);

}  // namespace msurg

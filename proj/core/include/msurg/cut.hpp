// Plane cut: intersect, re-triangulate, split into per-side sub-models.
//
// Straddling faces are replaced by the 1+2 rule (lone-vertex side keeps one
// triangle, the quad side two, split along its shorter diagonal). Each
// crossing point is emitted once per side so the sides decouple; no caps are
// generated, cross-sections stay open. Vertices inside the on-plane band
// count as Positive so no face straddles three states.
#pragma once

#include "msurg/adjacency.hpp"
#include "msurg/mesh.hpp"
#include "msurg/predicates.hpp"

namespace msurg {

struct CutReport {
    std::vector<Vec3> intersection_points;  // one per crossed edge, pre-duplication
    int intersection_count = 0;
    std::vector<SkinnedMesh> submeshes;  // compacted, one per connected component
    double elapsed_ms = 0.0;
    // Per submesh, the delta in the input mesh's index space. Applying
    // delta_per_submesh[k] to a copy of the input yields submeshes[k] up to
    // compaction (vertices of the other components become isolated, since
    // deltas never delete vertices); adjacency maps patch the same way.
    std::vector<MeshDelta> delta_per_submesh;
};

// A plane missing the mesh yields one submesh identical to the input; an
// empty mesh yields an empty report. The input mesh and maps are not
// modified; callers pick a submesh and patch with its delta.
CutReport cut(const SkinnedMesh& mesh, const AdjacencyMaps& maps, const Plane& plane);

}  // namespace msurg

// Linear blend skinning.
#pragma once

#include "msurg/mesh.hpp"

namespace msurg {

// Blends each rest position through the pose's bone transforms weighted by
// the vertex's weight set. The identity pose returns rest positions exactly.
std::vector<Vec3> apply_pose(const SkinnedMesh& mesh, const Pose& pose);

// Skins a single point with an explicit weight set (used for particle
// centers that do not coincide with a mesh vertex).
Vec3 skin_point(const Vec3& rest, const WeightSet& weights, const Pose& pose);

}  // namespace msurg

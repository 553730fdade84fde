#include "msurg/skinning.hpp"

#include "msurg/error.hpp"
#include "msurg/parallel.hpp"

namespace msurg {

Vec3 skin_point(const Vec3& rest, const WeightSet& weights, const Pose& pose) {
    Vec3 out = Vec3::Zero();
    for (const WeightEntry& e : weights.entries)
        out += e.weight * pose.bones[static_cast<std::size_t>(e.bone)].apply(rest);
    return out;
}

std::vector<Vec3> apply_pose(const SkinnedMesh& mesh, const Pose& pose) {
    if (!mesh.has_weights()) throw GeometryError("apply_pose requires vertex weights");
    if (static_cast<int>(pose.bones.size()) != mesh.bone_count)
        throw GeometryError("pose has " + std::to_string(pose.bones.size()) +
                            " bones, mesh expects " + std::to_string(mesh.bone_count));
    std::vector<Vec3> out(mesh.positions.size());
    parallel_for(mesh.positions.size(), [&](std::size_t v) {
        out[v] = skin_point(mesh.positions[v], mesh.weights[v], pose);
    });
    return out;
}

}  // namespace msurg

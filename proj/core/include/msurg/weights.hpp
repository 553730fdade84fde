// Sparse per-vertex bone weights and the interpolation used to assign
// weights to vertices introduced by cut, tear, drill and subdivision.
#pragma once

#include <utility>
#include <vector>

namespace msurg {

// At most kMaxBoneInfluences entries survive pruning.
inline constexpr int kMaxBoneInfluences = 4;

struct WeightEntry {
    int bone = 0;
    double weight = 0.0;
    bool operator==(const WeightEntry&) const = default;
};

// Normalized sparse weight list, kept sorted by bone id.
struct WeightSet {
    std::vector<WeightEntry> entries;

    bool empty() const { return entries.empty(); }
    double sum() const;
    bool operator==(const WeightSet&) const = default;

    static WeightSet single(int bone) { return WeightSet{{{bone, 1.0}}}; }
};

// Keeps the kMaxBoneInfluences largest entries (ties broken toward lower bone
// ids), renormalizes to sum 1, sorts by bone id.
WeightSet prune_and_normalize(WeightSet w);

// Linear interpolation along a split edge: (1-t) * w0 + t * w1 over the union
// of bone supports, then pruned and renormalized.
WeightSet interpolate_weights(const WeightSet& w0, const WeightSet& w1, double t);

// Convex combination over a triangle, for vertices introduced in a face
// interior (drill contour points, subdivision midpoints use the edge form).
WeightSet interpolate_weights_barycentric(const WeightSet& wa, const WeightSet& wb,
                                          const WeightSet& wc, double u, double v, double w);

}  // namespace msurg

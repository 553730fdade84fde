#include "msurg/weights.hpp"

#include <algorithm>
#include <map>

namespace msurg {

double WeightSet::sum() const {
    double s = 0.0;
    for (const WeightEntry& e : entries) s += e.weight;
    return s;
}

WeightSet prune_and_normalize(WeightSet w) {
    auto& e = w.entries;
    e.erase(std::remove_if(e.begin(), e.end(),
                           [](const WeightEntry& x) { return x.weight <= 0.0; }),
            e.end());
    if (e.size() > static_cast<std::size_t>(kMaxBoneInfluences)) {
        std::stable_sort(e.begin(), e.end(), [](const WeightEntry& a, const WeightEntry& b) {
            if (a.weight != b.weight) return a.weight > b.weight;
            return a.bone < b.bone;
        });
        e.resize(kMaxBoneInfluences);
    }
    std::sort(e.begin(), e.end(),
              [](const WeightEntry& a, const WeightEntry& b) { return a.bone < b.bone; });
    double total = 0.0;
    for (const WeightEntry& x : e) total += x.weight;
    if (total > 0.0) {
        for (WeightEntry& x : e) x.weight /= total;
    }
    return w;
}

namespace {

WeightSet combine(std::initializer_list<std::pair<const WeightSet*, double>> terms) {
    std::map<int, double> acc;
    for (const auto& [set, factor] : terms) {
        if (factor == 0.0) continue;
        for (const WeightEntry& e : set->entries) acc[e.bone] += factor * e.weight;
    }
    WeightSet out;
    out.entries.reserve(acc.size());
    for (const auto& [bone, weight] : acc) out.entries.push_back({bone, weight});
    return prune_and_normalize(std::move(out));
}

}  // namespace

WeightSet interpolate_weights(const WeightSet& w0, const WeightSet& w1, double t) {
    return combine({{&w0, 1.0 - t}, {&w1, t}});
}

WeightSet interpolate_weights_barycentric(const WeightSet& wa, const WeightSet& wb,
                                          const WeightSet& wc, double u, double v, double w) {
    return combine({{&wa, u}, {&wb, v}, {&wc, w}});
}

}  // namespace msurg

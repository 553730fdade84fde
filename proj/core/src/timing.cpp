#include "msurg/timing.hpp"

#include "msurg/cut.hpp"
#include "msurg/drill.hpp"
#include "msurg/error.hpp"
#include "msurg/softbody.hpp"
#include "msurg/tear.hpp"
#include "msurg/testmesh.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

namespace msurg {

RegressionResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    RegressionResult fit;
    if (x.size() != y.size() || x.size() < 2) return fit;
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return fit;  // all x identical
    fit.defined = true;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

TimedSample time_repeated(const std::string& name, const std::string& params, double count,
                          int repetitions, const std::function<void()>& prepare,
                          const std::function<void()>& op) {
    if (repetitions < 1) throw ScriptError("timing needs at least one repetition");
    TimedSample sample;
    sample.name = name;
    sample.params = params;
    sample.count = count;
    sample.repetitions = repetitions;
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    for (int i = 0; i < repetitions; ++i) {
        if (prepare) prepare();
        const auto t0 = std::chrono::steady_clock::now();
        op();
        times.push_back(std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count());
    }
    sample.min_ms = *std::min_element(times.begin(), times.end());
    sample.max_ms = *std::max_element(times.begin(), times.end());
    sample.median_ms = median_of(std::move(times));
    return sample;
}

namespace {

ScalingRecord cut_suite(const std::vector<int>& sizes, int reps) {
    ScalingRecord record;
    record.suite = "cut";
    for (int n : sizes) {
        const SkinnedMesh mesh = make_cylinder(n, 4);
        const AdjacencyMaps maps = build_adjacency(mesh);
        const Plane plane = cylinder_midplane(4);
        int count = 0;
        auto sample = time_repeated(
            "cut", "cylinder(" + std::to_string(n) + ",4) midplane", 0.0, reps, {},
            [&] { count = cut(mesh, maps, plane).intersection_count; });
        sample.count = count;
        record.samples.push_back(std::move(sample));
    }
    return record;
}

ScalingRecord tear_suite(const std::vector<int>& sizes, int reps) {
    ScalingRecord record;
    record.suite = "tear";
    for (int n : sizes) {
        const SkinnedMesh base = make_plate(n);
        const AdjacencyMaps base_maps = build_adjacency(base);
        const double y0 = (n / 2 + 0.5) / n;  // between grid rows
        ScalpelStroke stroke;
        stroke.start_a = Vec3(0.03, y0, -1.0);
        stroke.start_b = Vec3(0.03, y0, 1.0);
        stroke.end_a = Vec3(0.97, y0, -1.0);
        stroke.end_b = Vec3(0.97, y0, 1.0);
        auto mesh = std::make_shared<SkinnedMesh>();
        auto maps = std::make_shared<AdjacencyMaps>();
        int count = 0;
        auto sample = time_repeated(
            "tear", "plate(" + std::to_string(n) + ") mid-line", 0.0, reps,
            [&, mesh, maps] {
                *mesh = base;
                *maps = base_maps;
            },
            [&, mesh, maps] {
                count = static_cast<int>(tear(*mesh, *maps, stroke).duplicated_pairs.size());
            });
        sample.count = count;
        record.samples.push_back(std::move(sample));
    }
    return record;
}

ScalingRecord drill_suite(const std::vector<int>& sizes, int reps) {
    ScalingRecord record;
    record.suite = "drill";
    for (int n : sizes) {
        const SkinnedMesh base = make_plate(n);
        const AdjacencyMaps base_maps = build_adjacency(base);
        DrillCylinder cyl;
        cyl.axis_start = Vec3(0.5, 0.5, -1.0);
        cyl.axis_end = Vec3(0.5, 0.5, 1.0);
        cyl.radius = 0.23;
        auto mesh = std::make_shared<SkinnedMesh>();
        auto maps = std::make_shared<AdjacencyMaps>();
        int count = 0;
        auto sample = time_repeated(
            "drill", "plate(" + std::to_string(n) + ") r=0.23", 0.0, reps,
            [&, mesh, maps] {
                *mesh = base;
                *maps = base_maps;
            },
            [&, mesh, maps] {
                count = static_cast<int>(drill(*mesh, *maps, cyl).contour_points.size());
            });
        sample.count = count;
        record.samples.push_back(std::move(sample));
    }
    return record;
}

ScalingRecord step_suite(const std::vector<int>& sizes, int reps) {
    ScalingRecord record;
    record.suite = "step";
    const SkinnedMesh mesh = make_plate(117);  // 13924 vertices, held fixed
    const SoftBodyParams params;
    for (int n : sizes) {
        const Clustering base = make_uniform_clustering(mesh, n, 64);
        {  // warm caches, the allocator, and the clock governor before timing
            Clustering warm = base;
            for (int i = 0; i < 8; ++i) step(warm, mesh, nullptr, params);
        }
        // A single step at small N is too short to time against OS jitter, so
        // each repetition times a batch and reports the per-step average.
        constexpr int kBatch = 32;
        auto clustering = std::make_shared<Clustering>();
        auto sample = time_repeated(
            "step", std::to_string(n) + " particles x 64 members", n, reps,
            [&, clustering] { *clustering = base; },
            [&, clustering] {
                for (int i = 0; i < kBatch; ++i) step(*clustering, mesh, nullptr, params);
            });
        sample.min_ms /= kBatch;
        sample.max_ms /= kBatch;
        sample.median_ms /= kBatch;
        record.samples.push_back(std::move(sample));
    }
    return record;
}

}  // namespace

ScalingRecord scaling_suite(SuiteKind which, int repetitions,
                            const std::vector<int>* sizes_override) {
    std::vector<int> sizes;
    if (sizes_override) sizes = *sizes_override;
    ScalingRecord record;
    switch (which) {
        case SuiteKind::Cut:
            if (sizes.empty()) sizes = {16, 32, 64, 128, 256};
            record = cut_suite(sizes, repetitions);
            break;
        case SuiteKind::Tear:
            if (sizes.empty()) sizes = {16, 24, 32, 48, 64};
            record = tear_suite(sizes, repetitions);
            break;
        case SuiteKind::Drill:
            if (sizes.empty()) sizes = {24, 32, 48, 64, 96};
            record = drill_suite(sizes, repetitions);
            break;
        case SuiteKind::Step:
            if (sizes.empty()) sizes = {224, 452, 863, 1726, 3452};
            record = step_suite(sizes, repetitions);
            break;
    }
    std::vector<double> x, y;
    for (const TimedSample& s : record.samples) {
        x.push_back(s.count);
        y.push_back(s.median_ms);
    }
    record.fit = linear_fit(x, y);
    return record;
}

}  // namespace msurg

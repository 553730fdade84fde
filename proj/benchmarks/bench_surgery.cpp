// Microbenchmarks: cut scaling, adjacency patch vs full rebuild, soft-body
// step cost, and 1-to-4 subdivision.
#include <benchmark/benchmark.h>

#include "msurg/adjacency.hpp"
#include "msurg/cut.hpp"
#include "msurg/drill.hpp"
#include "msurg/softbody.hpp"
#include "msurg/testmesh.hpp"

#include <vector>

namespace {

void bm_cut_cylinder(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const msurg::SkinnedMesh mesh = msurg::make_cylinder(n, 4);
    const msurg::AdjacencyMaps maps = msurg::build_adjacency(mesh);
    const msurg::Plane plane = msurg::cylinder_midplane(4);
    for (auto _ : state) {
        msurg::CutReport report = msurg::cut(mesh, maps, plane);
        benchmark::DoNotOptimize(report.intersection_count);
    }
    state.SetComplexityN(2 * n);  // crossings scale with the circumference
}
BENCHMARK(bm_cut_cylinder)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oN);

void bm_adjacency_rebuild(benchmark::State& state) {
    const msurg::SkinnedMesh mesh = msurg::make_plate(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        msurg::AdjacencyMaps maps = msurg::build_adjacency(mesh);
        benchmark::DoNotOptimize(maps.vertex_neighbors.size());
    }
}
BENCHMARK(bm_adjacency_rebuild)->Arg(16)->Arg(32)->Arg(64);

void bm_adjacency_patch(benchmark::State& state) {
    // Patch cost after drilling a small hole: compare against a full rebuild
    // at the same size with bm_adjacency_rebuild.
    const int n = static_cast<int>(state.range(0));
    msurg::SkinnedMesh mesh = msurg::make_plate(n);
    msurg::AdjacencyMaps maps = msurg::build_adjacency(mesh);
    msurg::DrillCylinder cyl;
    cyl.axis_start = msurg::Vec3(0.5, 0.5, -1.0);
    cyl.axis_end = msurg::Vec3(0.5, 0.5, 1.0);
    cyl.radius = 0.1;
    const msurg::DrillReport report = msurg::drill(mesh, maps, cyl);
    const msurg::SkinnedMesh before = msurg::make_plate(n);
    const msurg::AdjacencyMaps base = msurg::build_adjacency(before);
    for (auto _ : state) {
        msurg::AdjacencyMaps patched = base;
        msurg::apply_delta(patched, report.delta);
        benchmark::DoNotOptimize(patched.last_patch_touches);
    }
}
BENCHMARK(bm_adjacency_patch)->Arg(16)->Arg(32)->Arg(64);

void bm_step(benchmark::State& state) {
    const msurg::SkinnedMesh mesh = msurg::make_plate(117);
    msurg::Clustering clustering =
        msurg::make_uniform_clustering(mesh, static_cast<int>(state.range(0)), 64);
    const msurg::SoftBodyParams params;
    for (auto _ : state) {
        std::vector<msurg::Vec3> out = msurg::step(clustering, mesh, nullptr, params);
        benchmark::DoNotOptimize(out.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_step)->Arg(224)->Arg(452)->Arg(863)->Arg(1726)->Arg(3452)->Complexity(benchmark::oN);

void bm_subdivide(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const msurg::SkinnedMesh base = msurg::make_plate(n);
    std::vector<int> faces(static_cast<std::size_t>(base.face_count()));
    for (std::size_t i = 0; i < faces.size(); ++i) faces[i] = static_cast<int>(i);
    for (auto _ : state) {
        state.PauseTiming();
        msurg::SkinnedMesh mesh = base;
        msurg::AdjacencyMaps maps = msurg::build_adjacency(mesh);
        state.ResumeTiming();
        msurg::MeshDelta delta = msurg::subdivide_1to4(mesh, maps, faces);
        benchmark::DoNotOptimize(delta.added_faces.size());
    }
}
BENCHMARK(bm_subdivide)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();

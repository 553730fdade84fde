// Adjacency build against a brute-force all-pairs oracle, and incremental
// patches against from-scratch rebuilds.
#include "doctest.h"

#include "msurg/adjacency.hpp"
#include "msurg/drill.hpp"
#include "msurg/error.hpp"
#include "msurg/testmesh.hpp"
#include "oracles.hpp"

#include <algorithm>

using namespace msurg;

TEST_SUITE("adjacency") {

TEST_CASE("single triangle") {
    SkinnedMesh tri;
    tri.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.faces = {{0, 1, 2}};
    const AdjacencyMaps maps = build_adjacency(tri);
    for (const auto& n : maps.vertex_neighbors) CHECK(n.size() == 2);
    CHECK(maps.face_neighbors[0].empty());
    CHECK(maps.edge_to_faces.size() == 3);
    CHECK(maps_equal(maps, oracle::adjacency(tri)));
}

TEST_CASE("shared edge makes mutual face neighbors") {
    SkinnedMesh quad;
    quad.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    quad.faces = {{0, 1, 2}, {0, 2, 3}};
    const AdjacencyMaps maps = build_adjacency(quad);
    CHECK(maps.face_neighbors[0] == std::vector<int>{1});
    CHECK(maps.face_neighbors[1] == std::vector<int>{0});
    CHECK(maps.edge_to_faces.at(edge_key(0, 2)) == std::vector<int>{0, 1});
    CHECK(maps_equal(maps, oracle::adjacency(quad)));
}

TEST_CASE("closed cube matches the all-pairs oracle") {
    const SkinnedMesh cube = oracle::cube();
    const AdjacencyMaps maps = build_adjacency(cube);
    for (const auto& n : maps.face_neighbors) CHECK(n.size() == 3);
    for (const auto& n : maps.vertex_neighbors) {
        CHECK(n.size() >= 4);
        CHECK(n.size() <= 6);
    }
    CHECK(maps_equal(maps, oracle::adjacency(cube)));
}

TEST_CASE("sphere matches the all-pairs oracle") {
    const SkinnedMesh sphere = make_sphere(8);
    CHECK(maps_equal(build_adjacency(sphere), oracle::adjacency(sphere)));
}

TEST_CASE("symmetry invariant") {
    const AdjacencyMaps maps = build_adjacency(make_plate(6));
    for (int v = 0; v < maps.vertex_count(); ++v)
        for (int u : maps.vertex_neighbors[static_cast<std::size_t>(v)]) {
            const auto& back = maps.vertex_neighbors[static_cast<std::size_t>(u)];
            CHECK(std::binary_search(back.begin(), back.end(), v));
        }
}

TEST_CASE("empty delta is the identity") {
    const SkinnedMesh plate = make_plate(3);
    AdjacencyMaps maps = build_adjacency(plate);
    const AdjacencyMaps before = maps;
    apply_delta(maps, MeshDelta{});
    CHECK(maps_equal(maps, before));
    CHECK(maps.last_patch_touches == 0);
}

TEST_CASE("subdivision delta equals a from-scratch rebuild") {
    SkinnedMesh mesh = make_plate(4);
    AdjacencyMaps maps = build_adjacency(mesh);
    subdivide_1to4(mesh, maps, {5, 6, 20});
    CHECK(maps_equal(maps, build_adjacency(mesh)));
}

TEST_CASE("removing one face of a fan patches symmetrically") {
    SkinnedMesh mesh = make_plate(3);
    AdjacencyMaps maps = build_adjacency(mesh);
    MeshDelta delta;
    delta.removed_faces = {4};
    apply_delta(maps, delta);
    apply_delta(mesh, delta);
    CHECK(maps_equal(maps, build_adjacency(mesh)));
    for (int v = 0; v < maps.vertex_count(); ++v)
        for (int u : maps.vertex_neighbors[static_cast<std::size_t>(v)]) {
            const auto& back = maps.vertex_neighbors[static_cast<std::size_t>(u)];
            CHECK(std::binary_search(back.begin(), back.end(), v));
        }
}

TEST_CASE("mixed delta with appended vertices and faces") {
    SkinnedMesh mesh = oracle::tetra();
    AdjacencyMaps maps = build_adjacency(mesh);
    MeshDelta delta;
    delta.added_vertices.push_back({4, Vec3(0.5, 0.5, 0.5), WeightSet::single(0), std::nullopt});
    delta.removed_faces = {3};
    delta.added_faces = {{1, 2, 4}, {2, 3, 4}, {3, 1, 4}};
    apply_delta(mesh, delta);
    apply_delta(maps, delta);
    CHECK(maps_equal(maps, build_adjacency(mesh)));
}

TEST_CASE("validate_delta names the offending index") {
    const MeshDelta ok;
    CHECK_NOTHROW(validate_delta(4, 4, ok));

    MeshDelta bad;
    bad.added_vertices.push_back({7, Vec3::Zero(), {}, std::nullopt});  // must be 4
    CHECK_THROWS_WITH_AS(validate_delta(4, 4, bad), doctest::Contains("7"), GeometryError);

    bad = MeshDelta{};
    bad.removed_faces = {9};
    CHECK_THROWS_WITH_AS(validate_delta(4, 4, bad), doctest::Contains("9"), GeometryError);

    bad = MeshDelta{};
    bad.removed_faces = {2, 1};  // must be ascending
    CHECK_THROWS_AS(validate_delta(4, 4, bad), GeometryError);

    bad = MeshDelta{};
    bad.added_faces = {{0, 1, 12}};
    CHECK_THROWS_WITH_AS(validate_delta(4, 4, bad), doctest::Contains("12"), GeometryError);
}

TEST_CASE("patch touches bounded by 16 per delta element") {
    SkinnedMesh mesh = make_plate(32);
    AdjacencyMaps maps = build_adjacency(mesh);
    DrillCylinder cyl{Vec3(0.5, 0.5, -1), Vec3(0.5, 0.5, 1), 0.15};
    const DrillReport report = drill(mesh, maps, cyl);
    CHECK(!report.delta.empty());
    // replay the patch on the pre-drill maps to read the touch counter
    AdjacencyMaps fresh = build_adjacency(make_plate(32));
    apply_delta(fresh, report.delta);
    CHECK(fresh.last_patch_touches > 0);
    CHECK(fresh.last_patch_touches <= 16 * report.delta.size());
}

TEST_CASE("non-manifold edge warns but builds") {
    SkinnedMesh mesh;
    mesh.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, -1, 0}};
    mesh.faces = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};  // edge 0-1 borders 3 faces
    const AdjacencyMaps maps = build_adjacency(mesh);
    CHECK(!maps.warnings.empty());
    CHECK(maps.edge_to_faces.at(edge_key(0, 1)).size() == 3);
}

}  // TEST_SUITE

// Script engine: parsing, pipeline enforcement, error prefixes, scene flow
// through surgery commands, save fan-out, determinism, and report emission.
#include "doctest.h"

#include "msurg/error.hpp"
#include "msurg/script.hpp"
#include "msurg/testmesh.hpp"
#include "oracles.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>

using namespace msurg;
namespace fs = std::filesystem;

namespace {

// Self-cleaning scratch directory for script inputs and outputs.
struct TempDir {
    fs::path path;
    TempDir() : path(oracle::temp_path("scriptdir")) { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

RunOptions fast_options(const TempDir& dir) {
    RunOptions opt;
    opt.out_dir = dir.file("out");
    opt.repetitions = 2;
    return opt;
}

}  // namespace

TEST_SUITE("script") {

TEST_CASE("parser strips comments and keeps line numbers") {
    const OperationScript script = parse_script_text(
        "# banner\n"
        "\n"
        "load a.obj\n"
        "cut --plane 0,0,1,0.5   # trailing note\n"
        "   \n"
        "stats\n");
    REQUIRE(script.commands.size() == 3);
    CHECK(script.commands[0].op == "load");
    CHECK(script.commands[0].args == std::vector<std::string>{"a.obj"});
    CHECK(script.commands[0].line == 3);
    CHECK(script.commands[1].op == "cut");
    CHECK(script.commands[1].args == std::vector<std::string>{"--plane", "0,0,1,0.5"});
    CHECK(script.commands[1].line == 4);
    CHECK(script.commands[2].op == "stats");
    CHECK(script.commands[2].line == 6);

    CHECK_THROWS_AS(parse_script("/nonexistent/script.txt"), IoError);
}

TEST_CASE("triangle script reports V=3 F=1") {
    TempDir dir;
    SkinnedMesh tri;
    tri.positions = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    tri.faces = {{0, 1, 2}};
    tri.bone_count = 1;
    tri.weights.assign(3, WeightSet::single(0));
    save_mesh(tri, dir.file("tri.obj"));

    ScriptRunner runner(fast_options(dir));
    runner.run(parse_script_text("load " + dir.file("tri.obj") + "\nstats\n"));
    REQUIRE(runner.stats().size() == 1);
    CHECK(runner.stats()[0].label == "stats #2");
    CHECK(runner.stats()[0].vertex_count == 3);
    CHECK(runner.stats()[0].face_count == 1);
    CHECK(runner.stats()[0].mesh_count == 1);
}

TEST_CASE("drill script removes the hole area") {
    TempDir dir;
    save_mesh(make_plate(32), dir.file("plate.obj"));
    ScriptRunner runner(fast_options(dir));
    runner.run(parse_script_text(
        "load " + dir.file("plate.obj") + "\n" +
        "stats\n"
        "optimize\n"
        "adjacency\n"
        "drill --axis 0.5,0.5,-1,0.5,0.5,1 --radius 0.2\n"
        "stats\n"));
    REQUIRE(runner.stats().size() == 2);
    const StatsRecord& before = runner.stats()[0];
    const StatsRecord& after = runner.stats()[1];
    CHECK(after.face_count < before.face_count);
    const double hole = before.total_area - after.total_area;
    const double disk = std::numbers::pi * 0.2 * 0.2;
    CHECK(hole == doctest::Approx(disk).epsilon(0.1));
    CHECK(hole <= disk + 1e-9);
    CHECK(after.boundary_edge_count > before.boundary_edge_count);
}

TEST_CASE("cut script saves both halves and conserves area") {
    TempDir dir;
    const SkinnedMesh tet = oracle::tetra();
    save_mesh(tet, dir.file("tet.obj"));
    const double area_before = mesh_stats(tet).total_area;

    ScriptRunner runner(fast_options(dir));
    runner.run(parse_script_text(
        "load " + dir.file("tet.obj") + "\n" +
        "optimize\n"
        "adjacency\n"
        "cut --plane 0,0,1,0.5\n"
        "save half.obj\n"
        "stats\n"));

    REQUIRE(runner.saved_files().size() == 2);
    const fs::path first(runner.saved_files()[0]);
    const fs::path second(runner.saved_files()[1]);
    CHECK(first.filename() == "half.obj");
    CHECK(second.filename() == "half_1.obj");
    const SkinnedMesh a = load_mesh(first.string());
    const SkinnedMesh b = load_mesh(second.string());
    CHECK(mesh_stats(a).total_area + mesh_stats(b).total_area ==
          doctest::Approx(area_before).epsilon(1e-9));
    CHECK(runner.stats()[0].mesh_count == 2);

    // the scene continued on the larger half
    CHECK(mesh_stats(a).face_count >= mesh_stats(b).face_count);
}

TEST_CASE("pipeline order is enforced") {
    TempDir dir;
    save_mesh(make_plate(2), dir.file("p.obj"));
    const std::string load = "load " + dir.file("p.obj") + "\n";
    auto expect_script_error = [&](const std::string& text, const char* needle) {
        ScriptRunner runner(fast_options(dir));
        CHECK_THROWS_WITH_AS(runner.run(parse_script_text(text)), doctest::Contains(needle),
                             ScriptError);
    };
    expect_script_error("stats\n", "requires a loaded mesh");
    expect_script_error(load + "adjacency\n", "requires optimize");
    expect_script_error(load + "optimize\ncut --plane 0,0,1,0.5\n", "run adjacency first");
    expect_script_error(load + "optimize\nadjacency\nimpulse --at 0,0,0 --force 1,0,0 --radius 1\n",
                        "run cluster first");
    expect_script_error(load + "optimize\nstep --n 1\n", "run cluster first");
    expect_script_error(load + "nonsense --x 1\n", "unknown command");
}

TEST_CASE("failures carry the command ordinal, op, and line") {
    TempDir dir;
    save_mesh(make_plate(4), dir.file("p.obj"));

    // I/O failure on command 1
    ScriptRunner r1(fast_options(dir));
    CHECK_THROWS_WITH_AS(r1.run(parse_script_text("load /nonexistent/mesh.obj\n")),
                         doctest::Contains("command #1 (load, line 1)"), IoError);

    // geometry failure on command 4, line 5 (comment shifts the line count)
    ScriptRunner r2(fast_options(dir));
    const std::string text = "load " + dir.file("p.obj") + "\n" +
                             "optimize\n"
                             "adjacency\n"
                             "# the stroke below misses the plate\n"
                             "tear --start 5,5,1,5,5,2 --end 6,5,1,6,5,2\n";
    CHECK_THROWS_WITH_AS(r2.run(parse_script_text(text)),
                         doctest::Contains("command #4 (tear, line 5)"), GeometryError);

    // argument failures stay script errors
    ScriptRunner r3(fast_options(dir));
    CHECK_THROWS_WITH_AS(
        r3.run(parse_script_text("load " + dir.file("p.obj") +
                                 "\noptimize\nadjacency\ncut --plane 0,0,1\n")),
        doctest::Contains("expects 4"), ScriptError);
    ScriptRunner r4(fast_options(dir));
    CHECK_THROWS_WITH_AS(
        r4.run(parse_script_text("load " + dir.file("p.obj") +
                                 "\noptimize\nadjacency\ndrill --axis 0,0,0,0,0,1 --radius abc\n")),
        doctest::Contains("not a number"), ScriptError);
}

TEST_CASE("cluster, impulse, and step move particles but not the rest mesh") {
    TempDir dir;
    save_mesh(make_plate(8), dir.file("p.obj"));
    ScriptRunner runner(fast_options(dir));
    runner.run(parse_script_text(
        "load " + dir.file("p.obj") + "\n" +
        "optimize\n"
        "adjacency\n"
        "cluster --range 0.4\n"
        "impulse --at 0.5,0.5,0 --force 0,0,50 --radius 0.3\n"
        "step --n 3 --k 40 --c 4 --dt 0.0111\n"));
    REQUIRE(runner.clustering());
    bool any_moved = false;
    for (const Particle& p : runner.clustering()->particles)
        any_moved |= (p.position - p.rest_center).norm() > 1e-12;
    CHECK(any_moved);

    // the rest geometry is untouched; deformation lives in the particles
    const SkinnedMesh plate = make_plate(8);
    REQUIRE(runner.active_mesh().vertex_count() == plate.vertex_count());
    for (int v = 0; v < plate.vertex_count(); ++v)
        CHECK(runner.active_mesh().positions[static_cast<std::size_t>(v)] ==
              plate.positions[static_cast<std::size_t>(v)]);

    // step sample: 3 real runs, padded to the repetition floor of 2 -> 3 kept
    const TimedSample& sample = runner.report().operations.back();
    CHECK(sample.name == "step");
    CHECK(sample.repetitions == 3);
    CHECK(sample.count == static_cast<double>(runner.clustering()->particles.size()));

    // unstable dt is rejected up front
    ScriptRunner bad(fast_options(dir));
    CHECK_THROWS_WITH_AS(
        bad.run(parse_script_text("load " + dir.file("p.obj") +
                                  "\noptimize\nadjacency\ncluster --range 0.4\nstep --dt 1\n")),
        doctest::Contains("stability"), ScriptError);
}

TEST_CASE("identical scripts produce byte-identical outputs") {
    TempDir dir;
    save_mesh(make_plate(8), dir.file("p.obj"));
    const std::string body =
        "load " + dir.file("p.obj") + "\n" +
        "optimize\n"
        "adjacency\n"
        "drill --axis 0.3,0.6,-1,0.3,0.6,1 --radius 0.15\n"
        "tear --start 0.1,0.2,1,0.1,0.2,-1 --end 0.9,0.2,1,0.9,0.2,-1\n"
        "save result.obj\n";

    std::vector<std::string> first, second;
    for (int round = 0; round < 2; ++round) {
        RunOptions opt = fast_options(dir);
        opt.out_dir = dir.file(round == 0 ? "a" : "b");
        ScriptRunner runner(opt);
        runner.run(parse_script_text(body));
        (round == 0 ? first : second) = runner.saved_files();
    }
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(oracle::read_file(first[i]) == oracle::read_file(second[i]));
        CHECK(oracle::read_file(first[i] + ".weights") ==
              oracle::read_file(second[i] + ".weights"));
    }
}

TEST_CASE("report file carries operations, suites, and stats as JSON") {
    TempDir dir;
    save_mesh(make_plate(8), dir.file("p.obj"));
    RunOptions opt = fast_options(dir);
    opt.seed = 7;
    opt.report_path = dir.file("report.json");
    const TimingReport report = run_script(
        parse_script_text("load " + dir.file("p.obj") + "\n" +
                          "optimize\n"
                          "adjacency\n"
                          "cut --plane 1,0,0,0.5\n"
                          "stats\n"),
        opt);
    CHECK(report.seed == 7);

    std::ifstream in(opt.report_path);
    REQUIRE(in.good());
    const nlohmann::json doc = nlohmann::json::parse(in);
    CHECK(doc["seed"] == 7);
    CHECK(doc["threads"] == 1);
    REQUIRE(doc["operations"].is_array());
    REQUIRE(doc["operations"].size() == 3);  // optimize, adjacency, cut
    for (const auto& op : doc["operations"]) {
        CHECK(op.contains("name"));
        CHECK(op["repetitions"] == 2);
        CHECK(op["min_ms"].get<double>() <= op["median_ms"].get<double>());
        CHECK(op["median_ms"].get<double>() <= op["max_ms"].get<double>());
    }
    CHECK(doc["operations"][2]["name"] == "cut");
    CHECK(doc["operations"][2]["count"].get<double>() > 0.0);
    REQUIRE(doc["stats"].is_array());
    CHECK(doc["stats"][0]["label"] == "stats #5");
    CHECK(doc["stats"][0]["vertices"].get<int>() > 0);

    // the human summary mentions every operation
    const std::string table = timing_summary_table(report);
    CHECK(table.find("cut") != std::string::npos);
    CHECK(table.find("adjacency") != std::string::npos);
}

}  // TEST_SUITE

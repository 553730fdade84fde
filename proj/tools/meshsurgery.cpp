// meshsurgery: run operation scripts over skinned meshes, generate test
// meshes, and run the timing suites.
#include "CLI11.hpp"

#include "msurg/error.hpp"
#include "msurg/parallel.hpp"
#include "msurg/report.hpp"
#include "msurg/script.hpp"
#include "msurg/testmesh.hpp"
#include "msurg/timing.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace {

int run_command(const std::string& script_path, const msurg::RunOptions& options) {
    const msurg::OperationScript script = msurg::parse_script(script_path);
    msurg::ScriptRunner runner(options);
    runner.run(script);
    std::fputs(msurg::timing_summary_table(runner.report()).c_str(), stdout);
    for (const msurg::StatsRecord& s : runner.stats())
        std::printf("%s: %d vertices, %d faces, %d edges (%d boundary), %d components, area %.9g, %d meshes\n",
                    s.label.c_str(), s.vertex_count, s.face_count, s.edge_count,
                    s.boundary_edge_count, s.connected_components, s.total_area, s.mesh_count);
    for (const std::string& path : runner.saved_files())
        std::printf("wrote %s\n", path.c_str());
    return 0;
}

int gen_command(const std::string& shape, int n, int m, const std::string& out) {
    msurg::SkinnedMesh mesh;
    if (shape == "plate")
        mesh = msurg::make_plate(n);
    else if (shape == "cylinder")
        mesh = msurg::make_cylinder(n, m);
    else if (shape == "sphere")
        mesh = msurg::make_sphere(n);
    else
        throw msurg::ScriptError("unknown shape: " + shape + " (plate, cylinder, sphere)");
    msurg::save_mesh(mesh, out);
    std::printf("wrote %s (%d vertices, %d faces)\n", out.c_str(), mesh.vertex_count(),
                mesh.face_count());
    return 0;
}

int suite_command(const std::string& which, int reps, int seed, int threads,
                  const std::string& report_path) {
    msurg::set_thread_count(threads);
    msurg::TimingReport report;
    report.seed = seed;
    report.threads = threads;
    std::vector<msurg::SuiteKind> kinds;
    if (which == "cut" || which == "all") kinds.push_back(msurg::SuiteKind::Cut);
    if (which == "tear" || which == "all") kinds.push_back(msurg::SuiteKind::Tear);
    if (which == "drill" || which == "all") kinds.push_back(msurg::SuiteKind::Drill);
    if (which == "step" || which == "all") kinds.push_back(msurg::SuiteKind::Step);
    if (kinds.empty())
        throw msurg::ScriptError("unknown suite: " + which + " (cut, tear, drill, step, all)");
    for (msurg::SuiteKind kind : kinds) report.suites.push_back(msurg::scaling_suite(kind, reps));
    std::fputs(msurg::timing_summary_table(report).c_str(), stdout);
    if (!report_path.empty()) msurg::write_timing_report(report_path, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surgical operations on skinned triangle meshes"};
    app.require_subcommand(1);

    std::string script_path;
    msurg::RunOptions options;
    CLI::App* run = app.add_subcommand("run", "execute an operation script");
    run->add_option("script", script_path, "script file, one command per line")->required();
    run->add_option("--out", options.out_dir, "directory for saved meshes");
    run->add_option("--seed", options.seed, "seed recorded in the report");
    run->add_option("--threads", options.threads, "worker threads");
    run->add_option("--report", options.report_path, "write a JSON timing report here");
    run->add_option("--reps", options.repetitions, "timing repetitions per operation");

    std::string shape, gen_out = "mesh.obj";
    int gen_n = 16, gen_m = 8;
    CLI::App* gen = app.add_subcommand("gen", "generate a test mesh");
    gen->add_option("shape", shape, "plate, cylinder, or sphere")->required();
    gen->add_option("--n", gen_n, "resolution");
    gen->add_option("--m", gen_m, "cylinder rings");
    gen->add_option("--out", gen_out, "output mesh file");

    std::string which = "all", suite_report;
    int suite_reps = 5, suite_seed = 42, suite_threads = 1;
    CLI::App* suite = app.add_subcommand("suite", "run the scaling suites");
    suite->add_option("which", which, "cut, tear, drill, step, or all");
    suite->add_option("--reps", suite_reps, "repetitions per ladder point");
    suite->add_option("--seed", suite_seed, "seed recorded in the report");
    suite->add_option("--threads", suite_threads, "worker threads");
    suite->add_option("--report", suite_report, "write a JSON timing report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return run_command(script_path, options);
        if (*gen) return gen_command(shape, gen_n, gen_m, gen_out);
        return suite_command(which, suite_reps, suite_seed, suite_threads, suite_report);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return msurg::exit_code_for(e);
    }
}

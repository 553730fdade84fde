// Operation scripting: parse a script file, execute it over a scene, time
// every operation, and emit meshes plus a report.
//
// A script is one command per line (# comments, blank lines ignored):
//
//   load <mesh-file>
//   optimize
//   adjacency
//   cluster --range 0.8
//   cut --plane nx,ny,nz,d
//   tear --start x0,y0,z0,x1,y1,z1 --end x0,y0,z0,x1,y1,z1 [--open f]
//   drill --axis x0,y0,z0,x1,y1,z1 --radius r [--min-contour 10]
//   impulse --at x,y,z --force fx,fy,fz --radius r
//   step --n 100 [--k 40] [--c 4] [--dt 0.0111]
//   save <mesh-file>
//   stats
//
// Pipeline order is enforced: load, then optimize, then adjacency before any
// surgery; cluster before impulse/step. After a cut the scene continues on
// the largest submesh (adjacency and clustering patched through its delta);
// the other submeshes stay in the scene and save writes them with _1, _2 ...
// suffixes. The scene's working mesh keeps orphaned vertices (deltas never
// delete vertices); save and stats operate on the compacted mesh.
#pragma once

#include "msurg/adjacency.hpp"
#include "msurg/mesh.hpp"
#include "msurg/report.hpp"
#include "msurg/softbody.hpp"
#include "msurg/timing.hpp"

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace msurg {

struct ScriptCommand {
    std::string op;
    std::vector<std::string> args;
    int line = 0;
};

struct OperationScript {
    std::vector<ScriptCommand> commands;
};

OperationScript parse_script(const std::string& path);
OperationScript parse_script_text(const std::string& text, const std::string& origin = "<script>");

struct RunOptions {
    std::string out_dir = ".";
    int seed = 42;   // recorded in the report; scripts are fully deterministic
    int threads = 1;
    std::string report_path;  // empty = no report file
    int repetitions = 5;      // timing repetitions per operation
};

class ScriptRunner {
  public:
    explicit ScriptRunner(RunOptions options);

    // Executes the whole script; the first failing command aborts with its
    // module error prefixed by the command ordinal and line.
    void run(const OperationScript& script);

    const TimingReport& report() const { return report_; }
    const std::vector<StatsRecord>& stats() const { return stats_; }
    const std::vector<std::string>& saved_files() const { return saved_; }

    // Scene state, exposed for tests.
    const std::vector<SkinnedMesh>& meshes() const { return meshes_; }
    const SkinnedMesh& active_mesh() const;
    const std::optional<AdjacencyMaps>& maps() const { return maps_; }
    const std::optional<Clustering>& clustering() const { return clustering_; }

  private:
    void execute(const ScriptCommand& cmd, int ordinal);

    RunOptions options_;
    TimingReport report_;
    std::vector<StatsRecord> stats_;
    std::vector<std::string> saved_;

    std::vector<SkinnedMesh> meshes_;  // [0] = active working mesh
    std::optional<AdjacencyMaps> maps_;
    std::optional<Clustering> clustering_;
    SoftBodyParams params_;
    std::unordered_set<int> torn_;
    bool optimized_ = false;
};

// Convenience wrapper: runs the script, writes the report file when
// requested, returns the timing report.
TimingReport run_script(const OperationScript& script, const RunOptions& options);

}  // namespace msurg

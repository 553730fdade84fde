#include "msurg/script.hpp"

#include "msurg/cut.hpp"
#include "msurg/drill.hpp"
#include "msurg/error.hpp"
#include "msurg/parallel.hpp"
#include "msurg/tear.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace msurg {

namespace {

OperationScript parse_stream(std::istream& in, const std::string& origin) {
    OperationScript script;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        ScriptCommand cmd;
        cmd.line = line_no;
        if (!(tokens >> cmd.op)) continue;
        std::string tok;
        while (tokens >> tok) cmd.args.push_back(tok);
        script.commands.push_back(std::move(cmd));
    }
    (void)origin;
    return script;
}

// Flag lookup over a command's argument list.
class Args {
  public:
    explicit Args(const ScriptCommand& cmd) : cmd_(cmd) {}

    std::optional<std::string> find(const std::string& flag) const {
        for (std::size_t i = 0; i + 1 < cmd_.args.size(); ++i)
            if (cmd_.args[i] == flag) return cmd_.args[i + 1];
        return std::nullopt;
    }
    std::string require(const std::string& flag) const {
        auto v = find(flag);
        if (!v) throw ScriptError(cmd_.op + " needs " + flag);
        return *v;
    }
    double number(const std::string& flag) const { return to_number(require(flag)); }
    double number_or(const std::string& flag, double fallback) const {
        auto v = find(flag);
        return v ? to_number(*v) : fallback;
    }
    int integer(const std::string& flag) const {
        return static_cast<int>(number(flag));
    }
    int integer_or(const std::string& flag, int fallback) const {
        auto v = find(flag);
        return v ? static_cast<int>(to_number(*v)) : fallback;
    }
    std::vector<double> numbers(const std::string& flag, std::size_t n) const {
        const std::string raw = require(flag);
        std::vector<double> out;
        std::string part;
        std::istringstream ss(raw);
        while (std::getline(ss, part, ',')) out.push_back(to_number(part));
        if (out.size() != n)
            throw ScriptError(cmd_.op + " " + flag + " expects " + std::to_string(n) +
                              " comma-separated numbers, got " + std::to_string(out.size()));
        return out;
    }
    std::string positional() const {
        if (cmd_.args.empty()) throw ScriptError(cmd_.op + " needs an argument");
        return cmd_.args.front();
    }

  private:
    double to_number(const std::string& s) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ScriptError(cmd_.op + ": not a number: '" + s + "'");
        }
    }
    const ScriptCommand& cmd_;
};

Vec3 vec3_at(const std::vector<double>& v, std::size_t i) {
    return Vec3(v[i], v[i + 1], v[i + 2]);
}

}  // namespace

OperationScript parse_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open script: " + path);
    return parse_stream(in, path);
}

OperationScript parse_script_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return parse_stream(in, origin);
}

ScriptRunner::ScriptRunner(RunOptions options) : options_(std::move(options)) {
    report_.seed = options_.seed;
    report_.threads = options_.threads < 1 ? 1 : options_.threads;
    if (options_.repetitions < 1) options_.repetitions = 1;
}

const SkinnedMesh& ScriptRunner::active_mesh() const {
    if (meshes_.empty()) throw ScriptError("no mesh loaded");
    return meshes_.front();
}

void ScriptRunner::run(const OperationScript& script) {
    set_thread_count(report_.threads);
    for (std::size_t i = 0; i < script.commands.size(); ++i) {
        const ScriptCommand& cmd = script.commands[i];
        const std::string where =
            "command #" + std::to_string(i + 1) + " (" + cmd.op + ", line " +
            std::to_string(cmd.line) + "): ";
        try {
            execute(cmd, static_cast<int>(i + 1));
        } catch (const FormatError& e) {
            throw IoError(where + e.what());
        } catch (const IoError& e) {
            throw IoError(where + e.what());
        } catch (const GeometryError& e) {
            throw GeometryError(where + e.what());
        } catch (const ScriptError& e) {
            throw ScriptError(where + e.what());
        }
    }
    if (!options_.report_path.empty()) write_timing_report(options_.report_path, report_, stats_);
}

void ScriptRunner::execute(const ScriptCommand& cmd, int ordinal) {
    const Args args(cmd);
    auto need_mesh = [&] {
        if (meshes_.empty()) throw ScriptError(cmd.op + " requires a loaded mesh");
    };
    auto need_maps = [&] {
        need_mesh();
        if (!maps_) throw ScriptError(cmd.op + " requires adjacency (run adjacency first)");
    };
    auto need_clustering = [&] {
        need_mesh();
        if (!clustering_) throw ScriptError(cmd.op + " requires clustering (run cluster first)");
    };
    const int reps = options_.repetitions;

    if (cmd.op == "load") {
        SkinnedMesh mesh = load_mesh(args.positional());
        validate_mesh(mesh);
        meshes_.assign(1, std::move(mesh));
        maps_.reset();
        clustering_.reset();
        torn_.clear();
        optimized_ = false;
    } else if (cmd.op == "optimize") {
        need_mesh();
        const SkinnedMesh base = meshes_.front();
        const double tol = default_merge_tolerance(base);
        report_.operations.push_back(time_repeated(
            "optimize", "tol=" + std::to_string(tol), base.vertex_count(), reps, {},
            [&] { meshes_.front() = remove_duplicates(base, tol).mesh; }));
        maps_.reset();
        clustering_.reset();
        optimized_ = true;
    } else if (cmd.op == "adjacency") {
        need_mesh();
        if (!optimized_) throw ScriptError("adjacency requires optimize first");
        report_.operations.push_back(
            time_repeated("adjacency", "full build", meshes_.front().face_count(), reps, {},
                          [&] { maps_ = build_adjacency(meshes_.front()); }));
    } else if (cmd.op == "cluster") {
        need_maps();
        const double range = args.number("--range");
        report_.operations.push_back(time_repeated(
            "cluster", "range=" + std::to_string(range), meshes_.front().vertex_count(), reps,
            {}, [&] { clustering_ = cluster(meshes_.front(), range); }));
    } else if (cmd.op == "cut") {
        need_maps();
        const auto p = args.numbers("--plane", 4);
        const Vec3 n(p[0], p[1], p[2]);
        const double len = n.norm();
        if (len <= 0.0) throw ScriptError("cut plane normal must be nonzero");
        const Plane plane{n / len, p[3] / len};
        CutReport last;
        report_.operations.push_back(time_repeated(
            "cut", args.require("--plane"), 0.0, reps, {},
            [&] { last = cut(meshes_.front(), *maps_, plane); }));
        report_.operations.back().count = last.intersection_count;

        // Continue on the largest submesh; keep the others for save.
        int largest = 0;
        for (std::size_t k = 1; k < last.submeshes.size(); ++k)
            if (last.submeshes[k].face_count() >
                last.submeshes[static_cast<std::size_t>(largest)].face_count())
                largest = static_cast<int>(k);
        const MeshDelta& delta = last.delta_per_submesh[static_cast<std::size_t>(largest)];
        apply_delta(meshes_.front(), delta);
        apply_delta(*maps_, delta);
        if (clustering_) update_clustering(*clustering_, meshes_.front(), delta);
        for (std::size_t k = 0; k < last.submeshes.size(); ++k)
            if (static_cast<int>(k) != largest) meshes_.push_back(last.submeshes[k]);
    } else if (cmd.op == "tear") {
        need_maps();
        const auto s = args.numbers("--start", 6);
        const auto e = args.numbers("--end", 6);
        ScalpelStroke stroke;
        stroke.start_a = vec3_at(s, 0);
        stroke.start_b = vec3_at(s, 3);
        stroke.end_a = vec3_at(e, 0);
        stroke.end_b = vec3_at(e, 3);
        stroke.opening_fraction = args.number_or("--open", 0.0);
        // Dry repetitions on copies, then the timed real run.
        auto mesh_copy = std::make_shared<SkinnedMesh>();
        auto maps_copy = std::make_shared<AdjacencyMaps>();
        int rep = 0;
        TearReport last;
        report_.operations.push_back(time_repeated(
            "tear", "open=" + std::to_string(stroke.opening_fraction), 0.0, reps,
            [&, mesh_copy, maps_copy] {
                ++rep;
                if (rep < reps) {
                    *mesh_copy = meshes_.front();
                    *maps_copy = *maps_;
                }
            },
            [&, mesh_copy, maps_copy] {
                if (rep < reps)
                    tear(*mesh_copy, *maps_copy, stroke, &torn_);
                else
                    last = tear(meshes_.front(), *maps_, stroke, &torn_);
            }));
        report_.operations.back().count = static_cast<double>(last.duplicated_pairs.size());
        for (const DeltaVertex& dv : last.delta.added_vertices) torn_.insert(dv.index);
        if (clustering_) update_clustering(*clustering_, meshes_.front(), last);
    } else if (cmd.op == "drill") {
        need_maps();
        const auto a = args.numbers("--axis", 6);
        DrillCylinder cyl;
        cyl.axis_start = vec3_at(a, 0);
        cyl.axis_end = vec3_at(a, 3);
        cyl.radius = args.number("--radius");
        const int min_contour = args.integer_or("--min-contour", 10);
        auto mesh_copy = std::make_shared<SkinnedMesh>();
        auto maps_copy = std::make_shared<AdjacencyMaps>();
        int rep = 0;
        DrillReport last;
        report_.operations.push_back(time_repeated(
            "drill", "r=" + std::to_string(cyl.radius), 0.0, reps,
            [&, mesh_copy, maps_copy] {
                ++rep;
                if (rep < reps) {
                    *mesh_copy = meshes_.front();
                    *maps_copy = *maps_;
                }
            },
            [&, mesh_copy, maps_copy] {
                if (rep < reps)
                    drill(*mesh_copy, *maps_copy, cyl, min_contour);
                else
                    last = drill(meshes_.front(), *maps_, cyl, min_contour);
            }));
        report_.operations.back().count = static_cast<double>(last.contour_points.size());
        if (clustering_) update_clustering(*clustering_, meshes_.front(), last);
    } else if (cmd.op == "impulse") {
        need_clustering();
        const auto at = args.numbers("--at", 3);
        const auto force = args.numbers("--force", 3);
        const double radius = args.number("--radius");
        apply_impulse(*clustering_, vec3_at(at, 0), vec3_at(force, 0), radius, params_.dt);
    } else if (cmd.op == "step") {
        need_clustering();
        const int n = args.integer_or("--n", 1);
        if (n < 1) throw ScriptError("step --n must be >= 1");
        params_.stiffness = args.number_or("--k", params_.stiffness);
        params_.damping = args.number_or("--c", params_.damping);
        params_.dt = args.number_or("--dt", params_.dt);
        params_.validate();
        // Time the real steps; pad with dry runs on a copy if n < reps.
        std::vector<double> times;
        TimedSample sample;
        sample.name = "step";
        sample.params = "n=" + std::to_string(n);
        sample.count = static_cast<double>(clustering_->particles.size());
        for (int i = 0; i < n; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            step(*clustering_, meshes_.front(), nullptr, params_);
            times.push_back(std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count());
        }
        for (int i = n; i < reps; ++i) {
            Clustering copy = *clustering_;
            const auto t0 = std::chrono::steady_clock::now();
            step(copy, meshes_.front(), nullptr, params_);
            times.push_back(std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count());
        }
        sample.repetitions = static_cast<int>(times.size());
        sample.min_ms = *std::min_element(times.begin(), times.end());
        sample.max_ms = *std::max_element(times.begin(), times.end());
        sample.median_ms = median_of(std::move(times));
        report_.operations.push_back(std::move(sample));
    } else if (cmd.op == "save") {
        need_mesh();
        namespace fs = std::filesystem;
        const fs::path target = fs::path(options_.out_dir) / args.positional();
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        for (std::size_t k = 0; k < meshes_.size(); ++k) {
            fs::path path = target;
            if (k > 0)
                path = target.parent_path() /
                       (target.stem().string() + "_" + std::to_string(k) +
                        target.extension().string());
            const SkinnedMesh out = k == 0 ? compact_mesh(meshes_[k]).mesh : meshes_[k];
            save_mesh(out, path.string());
            saved_.push_back(path.string());
        }
    } else if (cmd.op == "stats") {
        need_mesh();
        const MeshStats s = mesh_stats(compact_mesh(meshes_.front()).mesh);
        StatsRecord record;
        record.label = "stats #" + std::to_string(ordinal);
        record.vertex_count = s.vertex_count;
        record.face_count = s.face_count;
        record.edge_count = s.edge_count;
        record.boundary_edge_count = s.boundary_edge_count;
        record.connected_components = s.connected_components;
        record.total_area = s.total_area;
        record.mesh_count = static_cast<int>(meshes_.size());
        stats_.push_back(record);
    } else {
        throw ScriptError("unknown command: " + cmd.op);
    }
}

TimingReport run_script(const OperationScript& script, const RunOptions& options) {
    ScriptRunner runner(options);
    runner.run(script);
    return runner.report();
}

}  // namespace msurg

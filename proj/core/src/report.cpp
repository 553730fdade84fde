#include "msurg/report.hpp"

#include "msurg/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace msurg {

namespace {

using nlohmann::json;

json sample_to_json(const TimedSample& s) {
    return json{{"name", s.name},       {"params", s.params},
                {"count", s.count},     {"min_ms", s.min_ms},
                {"max_ms", s.max_ms},   {"median_ms", s.median_ms},
                {"repetitions", s.repetitions}};
}

json fit_to_json(const RegressionResult& fit) {
    json j{{"defined", fit.defined}};
    if (fit.defined) {
        j["slope_ms_per_count"] = fit.slope;
        j["intercept_ms"] = fit.intercept;
        j["r_squared"] = fit.r_squared;
    }
    return j;
}

}  // namespace

std::string timing_report_to_json(const TimingReport& report,
                                  const std::vector<StatsRecord>& stats) {
    json j;
    j["seed"] = report.seed;
    j["threads"] = report.threads;
    j["operations"] = json::array();
    for (const TimedSample& s : report.operations) j["operations"].push_back(sample_to_json(s));
    j["suites"] = json::array();
    for (const ScalingRecord& r : report.suites) {
        json suite{{"suite", r.suite}, {"fit", fit_to_json(r.fit)}, {"samples", json::array()}};
        for (const TimedSample& s : r.samples) suite["samples"].push_back(sample_to_json(s));
        j["suites"].push_back(std::move(suite));
    }
    if (!stats.empty()) {
        j["stats"] = json::array();
        for (const StatsRecord& s : stats)
            j["stats"].push_back(json{{"label", s.label},
                                      {"vertices", s.vertex_count},
                                      {"faces", s.face_count},
                                      {"edges", s.edge_count},
                                      {"boundary_edges", s.boundary_edge_count},
                                      {"components", s.connected_components},
                                      {"area", s.total_area},
                                      {"meshes", s.mesh_count}});
    }
    return j.dump(2) + "\n";
}

void write_timing_report(const std::string& path, const TimingReport& report,
                         const std::vector<StatsRecord>& stats) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report file: " + path);
    out << timing_report_to_json(report, stats);
    if (!out) throw IoError("failed while writing report file: " + path);
}

std::string timing_summary_table(const TimingReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %-34s %10s %10s %10s %10s %5s\n", "op", "params",
                  "count", "median_ms", "min_ms", "max_ms", "reps");
    out << line;
    auto row = [&](const TimedSample& s) {
        std::snprintf(line, sizeof line, "%-10s %-34s %10.0f %10.4f %10.4f %10.4f %5d\n",
                      s.name.c_str(), s.params.c_str(), s.count, s.median_ms, s.min_ms, s.max_ms,
                      s.repetitions);
        out << line;
    };
    for (const TimedSample& s : report.operations) row(s);
    for (const ScalingRecord& r : report.suites) {
        for (const TimedSample& s : r.samples) row(s);
        if (r.fit.defined) {
            std::snprintf(line, sizeof line,
                          "suite %-8s fit: median_ms = %.6g * count + %.6g   (R^2 = %.4f)\n",
                          r.suite.c_str(), r.fit.slope, r.fit.intercept, r.fit.r_squared);
            out << line;
        } else {
            std::snprintf(line, sizeof line, "suite %-8s fit: undefined (needs >= 2 sizes)\n",
                          r.suite.c_str());
            out << line;
        }
    }
    return out.str();
}

}  // namespace msurg

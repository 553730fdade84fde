// Machine-parseable JSON emission and a human summary table for timing
// reports.
#pragma once

#include "msurg/timing.hpp"

#include <string>
#include <vector>

namespace msurg {

struct StatsRecord {
    std::string label;  // originating command, e.g. "stats #4"
    int vertex_count = 0;
    int face_count = 0;
    int edge_count = 0;
    int boundary_edge_count = 0;
    int connected_components = 0;
    double total_area = 0.0;
    int mesh_count = 1;  // meshes currently in the scene
};

std::string timing_report_to_json(const TimingReport& report,
                                  const std::vector<StatsRecord>& stats = {});
void write_timing_report(const std::string& path, const TimingReport& report,
                         const std::vector<StatsRecord>& stats = {});

// Fixed-width table of the per-operation samples and suite fits.
std::string timing_summary_table(const TimingReport& report);

}  // namespace msurg

// Wall-clock measurement, least-squares fits, and the scaling suites that
// check operation cost against its driving count (intersection points for
// surgery, particles for the soft-body step).
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace msurg {

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool defined = false;  // needs >= 2 distinct x values
};

// Ordinary least squares of y against x. With zero residual and zero
// variance in y the fit is exact and r_squared reports 1.
RegressionResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct TimedSample {
    std::string name;
    std::string params;
    double count = 0.0;  // regression predictor
    double min_ms = 0.0;
    double max_ms = 0.0;
    double median_ms = 0.0;
    int repetitions = 0;
};

// Runs op repetitions times (>= 1), calling prepare un-timed before each
// repetition; records min/max/median wall time.
TimedSample time_repeated(const std::string& name, const std::string& params, double count,
                          int repetitions, const std::function<void()>& prepare,
                          const std::function<void()>& op);

double median_of(std::vector<double> values);

struct ScalingRecord {
    std::string suite;
    std::vector<TimedSample> samples;
    RegressionResult fit;  // median_ms against count
};

enum class SuiteKind { Cut, Tear, Drill, Step };

// Standard ladders: cut on cylinder(n,4) for n in {16..256}; tear and drill
// on plates of growing resolution; step on a fixed ~14k-vertex plate with
// particle counts {224, 452, 863, 1726, 3452} at 64 members each.
// sizes_override swaps in a custom ladder (a single size yields an
// undefined fit).
ScalingRecord scaling_suite(SuiteKind which, int repetitions = 5,
                            const std::vector<int>* sizes_override = nullptr);

struct TimingReport {
    int seed = 0;
    int threads = 1;
    std::vector<TimedSample> operations;
    std::vector<ScalingRecord> suites;
};

}  // namespace msurg

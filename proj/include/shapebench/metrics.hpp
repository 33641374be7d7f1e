#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shapebench/objective.hpp"
#include "shapebench/optimizers.hpp"
#include "shapebench/search_space.hpp"

namespace shapebench {

enum class BenchmarkSource { long_ga, exhaustive_grid, analytic };

std::string to_string(BenchmarkSource s);
std::optional<BenchmarkSource> benchmark_source_from_string(const std::string& s);

/// The reference optimum (X*, Y*) every metric is measured against.
struct Benchmark {
    Kwh y_star = 0.0;
    ShapeVector x_star;
    BenchmarkSource source = BenchmarkSource::analytic;
    std::int64_t evals_used = 0;
};

struct MetricsConfig {
    double success_tol = 0.005;  // +-0.5% relative band around Y*
    int k = 5;                   // successes required before effort is met
    void validate() const;
};

/// min <= q1 <= median <= q3 <= max; quartiles by linear interpolation at
/// q*(n-1); std is the sample (n-1) standard deviation.
struct BoxplotStats {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double mean = 0.0, std_dev = 0.0;
};

/// Percentage of trace records with |f - Y*| / Y* <= tol.
double success_rate(const RunTrace& trace, const Benchmark& bench, double tol);

/// Mean absolute percentage error of per-repetition bests against Y*:
/// (100/n) * sum |Y* - best_i| / Y*.
double mape(const std::vector<Kwh>& run_bests, const Benchmark& bench);

struct EffortResult {
    std::int64_t evals = 0;  // index of the k-th success, or trace length
    bool censored = false;   // fewer than k successes in the trace
};

/// 1-based index of the k-th success; censored at the trace length otherwise.
EffortResult computational_effort(const RunTrace& trace, const Benchmark& bench,
                                  double tol, int k);

BoxplotStats boxplot_stats(std::vector<double> values);

using ObjectiveFactory = std::function<std::unique_ptr<Objective>()>;

/// Estimates (X*, Y*):
///   long_ga         30-generation GA (100/50, default elitism/mutation), uncapped
///   exhaustive_grid argmin over every feasible lattice point
///   analytic        the synthetic landscape's known optimum, zero evaluations
/// `analytic_params` is required for the analytic method.
Benchmark estimate_benchmark(const SpaceSpec& space, const ObjectiveFactory& make_objective,
                             BenchmarkSource method, std::uint64_t master_seed,
                             const SyntheticParams* analytic_params = nullptr);

}  // namespace shapebench

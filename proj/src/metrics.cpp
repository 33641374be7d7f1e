#include "shapebench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "shapebench/errors.hpp"

namespace shapebench {

std::string to_string(BenchmarkSource s) {
    switch (s) {
        case BenchmarkSource::long_ga: return "long_ga";
        case BenchmarkSource::exhaustive_grid: return "exhaustive_grid";
        case BenchmarkSource::analytic: return "analytic";
    }
    return "?";
}

std::optional<BenchmarkSource> benchmark_source_from_string(const std::string& s) {
    if (s == "long_ga") return BenchmarkSource::long_ga;
    if (s == "exhaustive_grid") return BenchmarkSource::exhaustive_grid;
    if (s == "analytic") return BenchmarkSource::analytic;
    return std::nullopt;
}

void MetricsConfig::validate() const {
    if (!(success_tol > 0.0) || !std::isfinite(success_tol)) {
        throw ConfigError("metrics.success_tol must be > 0");
    }
    if (k < 1) throw ConfigError("metrics.k must be >= 1");
}

namespace {

bool is_success(Kwh f, Kwh y_star, double tol) {
    return std::abs(f - y_star) / y_star <= tol;
}

void require_positive_benchmark(const Benchmark& bench) {
    if (!(bench.y_star > 0.0)) {
        throw ContractViolation("benchmark y_star must be > 0 for relative metrics");
    }
}

}  // namespace

double success_rate(const RunTrace& trace, const Benchmark& bench, double tol) {
    if (trace.records.empty()) throw ContractViolation("success_rate: empty trace");
    require_positive_benchmark(bench);
    std::size_t hits = 0;
    for (const EvalRecord& r : trace.records) {
        if (is_success(r.f, bench.y_star, tol)) ++hits;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(trace.records.size());
}

double mape(const std::vector<Kwh>& run_bests, const Benchmark& bench) {
    if (run_bests.empty()) throw ContractViolation("mape: empty best-value list");
    require_positive_benchmark(bench);
    double acc = 0.0;
    for (Kwh best : run_bests) {
        acc += std::abs(bench.y_star - best) / bench.y_star;
    }
    return 100.0 * acc / static_cast<double>(run_bests.size());
}

EffortResult computational_effort(const RunTrace& trace, const Benchmark& bench,
                                  double tol, int k) {
    if (k < 1) throw ContractViolation("computational_effort: k must be >= 1");
    require_positive_benchmark(bench);
    int seen = 0;
    for (const EvalRecord& r : trace.records) {
        if (is_success(r.f, bench.y_star, tol)) {
            if (++seen == k) return EffortResult{r.index, false};
        }
    }
    return EffortResult{static_cast<std::int64_t>(trace.records.size()), true};
}

BoxplotStats boxplot_stats(std::vector<double> values) {
    if (values.empty()) throw ContractViolation("boxplot_stats: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };

    BoxplotStats s;
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - s.mean;
            ss += d * d;
        }
        s.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

Benchmark estimate_benchmark(const SpaceSpec& space, const ObjectiveFactory& make_objective,
                             BenchmarkSource method, std::uint64_t master_seed,
                             const SyntheticParams* analytic_params) {
    space.validate();
    Benchmark bench;
    bench.source = method;
    switch (method) {
        case BenchmarkSource::analytic: {
            if (analytic_params == nullptr) {
                throw ConfigError("analytic benchmark requires a synthetic objective");
            }
            bench.y_star = analytic_params->baseline_kwh;
            bench.x_star = analytic_params->target;
            bench.evals_used = 0;
            break;
        }
        case BenchmarkSource::exhaustive_grid: {
            const std::vector<ShapeVector> lattice = grid_points(space);
            auto obj = make_objective();
            bool first = true;
            for (const ShapeVector& p : lattice) {
                const Kwh f = obj->evaluate(p);
                if (first || f < bench.y_star) {
                    bench.y_star = f;
                    bench.x_star = p;
                    first = false;
                }
            }
            bench.evals_used = obj->eval_count();
            break;
        }
        case BenchmarkSource::long_ga: {
            GaConfig cfg;
            cfg.num_gen = 30;
            // Uncapped: the budget is exactly what the generation structure needs.
            cfg.budget = cfg.init_pop +
                         static_cast<std::int64_t>(cfg.num_gen) * (cfg.gen_pop - cfg.num_elit);
            auto obj = make_objective();
            const RunTrace trace =
                run_ga(cfg, space, *obj, derive_stream_seed(master_seed, "benchmark", 0));
            const EvalRecord& best = trace.best();
            bench.y_star = best.f;
            bench.x_star = best.x;
            bench.evals_used = static_cast<std::int64_t>(trace.length());
            break;
        }
    }
    return bench;
}

}  // namespace shapebench

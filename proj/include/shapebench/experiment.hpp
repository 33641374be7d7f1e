#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shapebench/external_objective.hpp"
#include "shapebench/metrics.hpp"
#include "shapebench/optimizers.hpp"
#include "shapebench/search_space.hpp"

namespace shapebench {

struct AlgorithmEntry {
    std::string id;  // "ga", "rs" or "gs"; keys seed streams and output rows
    std::variant<GaConfig, RsConfig, GsConfig> config;
    std::int64_t budget() const;
};

struct ObjectiveChoice {
    std::variant<SyntheticParams, ExternalObjectiveConfig> choice;
    bool memoize = false;  // opt-in cache, recorded in metadata
    bool is_synthetic() const { return std::holds_alternative<SyntheticParams>(choice); }
    const SyntheticParams* synthetic() const {
        return std::get_if<SyntheticParams>(&choice);
    }
};

/// Full declarative description of one experiment.
struct ExperimentConfig {
    SpaceSpec space;
    ObjectiveChoice objective;
    std::vector<AlgorithmEntry> algorithms;
    int repetitions = 10;
    std::uint64_t master_seed = 0;
    BenchmarkSource benchmark_method = BenchmarkSource::exhaustive_grid;
    MetricsConfig metrics;
    std::string output_dir = "out";
    int workers = 1;

    void validate() const;
    /// Resolved config echoed into metadata.json (and usable as input again).
    nlohmann::json to_json() const;
};

/// Parses and validates a config document. Unknown keys, missing required
/// keys, and out-of-range values raise ConfigError naming the offending key.
ExperimentConfig load_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Fresh objective per run: synthetic or external per config, memoized when
/// requested. The returned handle owns everything it needs.
std::unique_ptr<Objective> make_objective(const ObjectiveChoice& choice);

struct RunOutcome {
    std::string algo;
    int rep = 0;  // 1-based
    std::uint64_t seed = 0;
    std::optional<RunTrace> trace;  // absent when the run failed
    std::int64_t evals_used = 0;
    std::string error;  // empty on success

    bool ok() const { return trace.has_value(); }
};

struct ExperimentResult {
    Benchmark benchmark;
    std::vector<RunOutcome> runs;  // ordered by (algorithm, repetition)
    std::filesystem::path output_dir;
};

/// Executes the full protocol: estimate the benchmark, run every
/// algorithm x repetition with derived seeds (possibly on several workers),
/// then write runs.csv, metrics.csv, summary.csv, per-run traces,
/// metadata.json and one boxplot SVG per measure into cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace shapebench

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shapebench/objective.hpp"
#include "shapebench/search_space.hpp"

namespace shapebench {

struct GaConfig {
    int init_pop = 100;        // evaluated once to seed the search
    int gen_pop = 50;          // working population per generation
    int num_gen = 5;           // generations after initialization
    int num_elit = 2;          // carried over unchanged, never re-evaluated
    double mutation_rate = 0.1;
    std::int64_t budget = 350;  // hard cap on objective evaluations

    /// Evaluations a full run consumes: min(budget, init_pop + num_gen*(gen_pop-num_elit)).
    std::int64_t expected_evals() const;
    void validate() const;
};

struct RsConfig {
    std::int64_t budget = 350;
    void validate() const;
};

struct GsConfig {
    std::int64_t budget = 350;
    bool without_replacement = true;
    void validate() const;
};

/// One objective evaluation: 1-based index, the point, its value, and the
/// running minimum up to and including this record.
struct EvalRecord {
    std::int64_t index = 0;
    ShapeVector x;
    Kwh f = 0.0;
    Kwh best_so_far = 0.0;
};

/// The complete, ordered evaluation history of one run. All metrics are
/// computed from traces.
struct RunTrace {
    std::string algo;
    std::uint64_t seed = 0;
    std::vector<EvalRecord> records;
    /// GA only: working-population minimum after initialization and after each
    /// generation. With elitism this sequence is non-increasing.
    std::vector<Kwh> generation_best;

    std::size_t length() const { return records.size(); }
    /// First record attaining the minimum value.
    const EvalRecord& best() const;
};

/// Splice at `cut` (1-based, in [1, n-1]): child1 takes a's first cut genes
/// and b's tail, child2 the reverse. Children are raw; callers repair them.
std::pair<ShapeVector, ShapeVector> one_point_crossover(const ShapeVector& a,
                                                        const ShapeVector& b, int cut);

/// Each gene independently, with probability `rate`, is replaced by a fresh
/// uniform draw from [-bound, +bound]. Result is raw; callers repair.
ShapeVector mutate(const ShapeVector& v, double rate, double bound, Rng& rng);

struct Individual {
    ShapeVector x;
    Kwh f = 0.0;
};
using Population = std::vector<Individual>;

/// The num_elit lowest-fitness individuals, ties broken by original position.
/// Returned in ascending fitness order.
Population select_elites(const Population& pop, int num_elit);

/// Genetic algorithm: evaluate init_pop uniform samples, truncate to the best
/// gen_pop, then per generation keep num_elit elites and refill with repaired,
/// mutated one-point-crossover children of uniformly chosen distinct parents.
/// Stops early when the budget runs out mid-generation; evaluated children
/// still enter the trace. `obj` must be fresh (eval_count == 0).
RunTrace run_ga(const GaConfig& cfg, const SpaceSpec& space, Objective& obj,
                std::uint64_t seed);

/// Uniform random search: exactly cfg.budget independent feasible samples.
RunTrace run_rs(const RsConfig& cfg, const SpaceSpec& space, Objective& obj,
                std::uint64_t seed);

/// Grid search: a seeded shuffle of the feasible lattice, evaluating the first
/// min(budget, |lattice|) points (or budget with-replacement draws when
/// without_replacement is false). Exhaustive when the budget covers the grid.
RunTrace run_gs(const GsConfig& cfg, const SpaceSpec& space, Objective& obj,
                std::uint64_t seed);

}  // namespace shapebench

#include "shapebench/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "shapebench/errors.hpp"

namespace shapebench {

std::int64_t GaConfig::expected_evals() const {
    const std::int64_t full =
        static_cast<std::int64_t>(init_pop) +
        static_cast<std::int64_t>(num_gen) * (gen_pop - num_elit);
    return std::min(budget, full);
}

void GaConfig::validate() const {
    if (init_pop < 1) throw ConfigError("ga.init_pop must be >= 1");
    if (gen_pop < 1) throw ConfigError("ga.gen_pop must be >= 1");
    if (num_gen < 0) throw ConfigError("ga.num_gen must be >= 0");
    if (num_elit < 0 || num_elit >= gen_pop) {
        throw ConfigError("ga.num_elit must be in [0, gen_pop)");
    }
    if ((gen_pop - num_elit) % 2 != 0) {
        throw ConfigError("ga.gen_pop - ga.num_elit must be even (crossover emits pairs)");
    }
    if (mutation_rate < 0.0 || mutation_rate > 1.0 || !std::isfinite(mutation_rate)) {
        throw ConfigError("ga.mutation_rate out of [0,1]");
    }
    if (budget < 1) throw ConfigError("ga.budget must be >= 1");
    if (budget < init_pop) throw ConfigError("ga.budget must cover init_pop");
    if (gen_pop > init_pop) {
        throw ConfigError("ga.gen_pop must be <= ga.init_pop (population is truncated)");
    }
    if (num_gen > 0 && gen_pop < 2) {
        throw ConfigError("ga.gen_pop must be >= 2 to select distinct parents");
    }
}

void RsConfig::validate() const {
    if (budget < 1) throw ConfigError("rs.budget must be >= 1");
}

void GsConfig::validate() const {
    if (budget < 1) throw ConfigError("gs.budget must be >= 1");
}

const EvalRecord& RunTrace::best() const {
    if (records.empty()) throw ContractViolation("RunTrace::best on an empty trace");
    const EvalRecord* b = &records.front();
    for (const EvalRecord& r : records) {
        if (r.f < b->f) b = &r;
    }
    return *b;
}

std::pair<ShapeVector, ShapeVector> one_point_crossover(const ShapeVector& a,
                                                        const ShapeVector& b, int cut) {
    if (a.size() != b.size() || a.size() < 2) {
        throw ContractViolation("one_point_crossover: parents must share a length >= 2");
    }
    const int n = static_cast<int>(a.size());
    if (cut < 1 || cut > n - 1) {
        throw ContractViolation("one_point_crossover: cut " + std::to_string(cut) +
                                " out of [1, " + std::to_string(n - 1) + "]");
    }
    ShapeVector c1 = a, c2 = b;
    for (int i = cut; i < n; ++i) {
        c1.values[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
        c2.values[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
    }
    return {std::move(c1), std::move(c2)};
}

ShapeVector mutate(const ShapeVector& v, double rate, double bound, Rng& rng) {
    if (rate < 0.0 || rate > 1.0) throw ContractViolation("mutate: rate out of [0,1]");
    ShapeVector out = v;
    for (double& x : out.values) {
        if (rng.bernoulli(rate)) x = rng.uniform(-bound, bound);
    }
    return out;
}

Population select_elites(const Population& pop, int num_elit) {
    if (num_elit < 0 || static_cast<std::size_t>(num_elit) > pop.size()) {
        throw ContractViolation("select_elites: num_elit out of [0, |pop|]");
    }
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return pop[i].f < pop[j].f; });
    Population elites;
    elites.reserve(static_cast<std::size_t>(num_elit));
    for (int i = 0; i < num_elit; ++i) elites.push_back(pop[order[static_cast<std::size_t>(i)]]);
    return elites;
}

namespace {

/// Appends one record per evaluation and maintains the running minimum.
class TraceRecorder {
public:
    TraceRecorder(std::string algo, std::uint64_t seed, Objective& obj) : obj_(obj) {
        if (obj.eval_count() != 0) {
            throw ContractViolation("optimizer requires a fresh objective (eval_count == 0)");
        }
        trace_.algo = std::move(algo);
        trace_.seed = seed;
    }

    Kwh evaluate(const ShapeVector& x) {
        const Kwh f = obj_.evaluate(x);
        const Kwh best = trace_.records.empty()
                             ? f
                             : std::min(trace_.records.back().best_so_far, f);
        trace_.records.push_back(EvalRecord{
            static_cast<std::int64_t>(trace_.records.size()) + 1, x, f, best});
        return f;
    }

    std::int64_t count() const { return static_cast<std::int64_t>(trace_.records.size()); }
    RunTrace take() { return std::move(trace_); }

private:
    Objective& obj_;
    RunTrace trace_;
};

double population_min(const Population& pop) {
    double m = std::numeric_limits<double>::infinity();
    for (const Individual& ind : pop) m = std::min(m, ind.f);
    return m;
}

}  // namespace

RunTrace run_ga(const GaConfig& cfg, const SpaceSpec& space, Objective& obj,
                std::uint64_t seed) {
    cfg.validate();
    space.validate();
    Rng rng(seed);
    TraceRecorder rec("ga", seed, obj);

    Population pop;
    pop.reserve(static_cast<std::size_t>(cfg.init_pop));
    for (int i = 0; i < cfg.init_pop; ++i) {
        ShapeVector x = sample_uniform(space, rng);
        const Kwh f = rec.evaluate(x);
        pop.push_back(Individual{std::move(x), f});
    }
    // Working population: the best gen_pop of the initial samples.
    pop = select_elites(pop, cfg.gen_pop);

    auto finish = [](TraceRecorder& r, std::vector<Kwh>&& gen_best) {
        RunTrace t = r.take();
        t.generation_best = std::move(gen_best);
        return t;
    };

    std::vector<Kwh> gen_best;
    gen_best.push_back(population_min(pop));

    const int num_children = cfg.gen_pop - cfg.num_elit;
    for (int gen = 0; gen < cfg.num_gen; ++gen) {
        if (rec.count() >= cfg.budget) break;
        const Population elites = select_elites(pop, cfg.num_elit);

        std::vector<ShapeVector> children;
        children.reserve(static_cast<std::size_t>(num_children));
        while (static_cast<int>(children.size()) < num_children) {
            const std::size_t ia = static_cast<std::size_t>(rng.uniform_index(pop.size()));
            std::size_t ib = static_cast<std::size_t>(rng.uniform_index(pop.size() - 1));
            if (ib >= ia) ++ib;  // distinct parents, uniform over ordered pairs
            const int cut =
                1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(space.n - 1)));
            auto [c1, c2] = one_point_crossover(pop[ia].x, pop[ib].x, cut);
            for (ShapeVector* c : {&c1, &c2}) {
                ShapeVector mutated = mutate(*c, cfg.mutation_rate, space.bound, rng);
                children.push_back(repair(space, mutated, rng));
            }
        }

        Population next = elites;
        for (ShapeVector& child : children) {
            if (rec.count() >= cfg.budget) {
                // Partial generation: evaluated children are already in the
                // trace; the truncated population is never used again.
                return finish(rec, std::move(gen_best));
            }
            const Kwh f = rec.evaluate(child);
            next.push_back(Individual{std::move(child), f});
        }
        pop = std::move(next);
        gen_best.push_back(population_min(pop));
    }
    return finish(rec, std::move(gen_best));
}

RunTrace run_rs(const RsConfig& cfg, const SpaceSpec& space, Objective& obj,
                std::uint64_t seed) {
    cfg.validate();
    space.validate();
    Rng rng(seed);
    TraceRecorder rec("rs", seed, obj);
    for (std::int64_t i = 0; i < cfg.budget; ++i) {
        rec.evaluate(sample_uniform(space, rng));
    }
    return rec.take();
}

RunTrace run_gs(const GsConfig& cfg, const SpaceSpec& space, Objective& obj,
                std::uint64_t seed) {
    cfg.validate();
    space.validate();
    Rng rng(seed);
    TraceRecorder rec("gs", seed, obj);
    const std::vector<ShapeVector> lattice = grid_points(space);
    if (cfg.without_replacement) {
        std::vector<std::size_t> order(lattice.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        const std::size_t take =
            std::min<std::size_t>(static_cast<std::size_t>(cfg.budget), lattice.size());
        for (std::size_t i = 0; i < take; ++i) {
            rec.evaluate(lattice[order[i]]);
        }
    } else {
        for (std::int64_t i = 0; i < cfg.budget; ++i) {
            rec.evaluate(lattice[static_cast<std::size_t>(rng.uniform_index(lattice.size()))]);
        }
    }
    return rec.take();
}

}  // namespace shapebench

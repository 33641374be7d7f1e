#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "shapebench/search_space.hpp"

namespace shapebench {

/// Annual energy in kilowatt-hours.
using Kwh = double;

/// Annual zone loads in Joules, as a simulator reports them.
struct ZoneLoads {
    double q_heat = 0.0;
    double q_cool = 0.0;
    double e_light_fans = 0.0;
};

/// (q_heat + q_cool + e_light_fans) / 3.6e6 — Joules to kWh.
/// Throws ContractViolation on non-finite or negative loads.
Kwh loads_to_kwh(const ZoneLoads& loads);

/// Objective handle: maps a feasible ShapeVector to annual energy and counts
/// every successful evaluation (the "number of simulations" unit all effort
/// metrics are denominated in).
class Objective {
public:
    virtual ~Objective() = default;
    Objective() = default;
    Objective(const Objective&) = delete;
    Objective& operator=(const Objective&) = delete;

    /// Counts only evaluations that complete; a throwing call costs nothing.
    Kwh evaluate(const ShapeVector& x) {
        const Kwh f = do_evaluate(x);
        ++count_;
        return f;
    }

    std::int64_t eval_count() const { return count_; }

private:
    virtual Kwh do_evaluate(const ShapeVector& x) = 0;
    std::int64_t count_ = 0;
};

/// Rugged synthetic landscape standing in for a building-energy simulator:
///   f(v) = A + sum_i [ w*(v_i - t_i)^2 + r*(1 - cos(omega*(v_i - t_i))) ] + noise
/// Both terms vanish at v = t, so the constrained global minimum is exactly A
/// when sigma = 0.
struct SyntheticParams {
    double baseline_kwh = 760.0;
    double quad_weight = 0.35;
    double rugged_amplitude = 6.0;
    double rugged_frequency = 2.0;  // rad/ft
    ShapeVector target = default_target(4);
    double noise_sigma = 0.0;  // kWh; 0 keeps evaluation a pure function
    std::uint64_t noise_seed = 0;

    /// Default optimum. For n = 4 the lattice point (2, -1, -3, 2) * 1.6,
    /// written as products so it is bit-identical to the enumerated grid;
    /// for other dimensions the zero vector.
    static ShapeVector default_target(int n);

    /// Throws ConfigError on bad weights or a target infeasible in `space`.
    void validate(const SpaceSpec& space) const;
};

/// Direct formula evaluation. Noise (sigma > 0) is a deterministic Gaussian
/// draw keyed by (noise_seed, bit pattern of v): the same point always gets
/// the same value, so traces stay replayable.
/// Throws ContractViolation when v and target lengths differ.
Kwh synthetic_value(const SyntheticParams& params, const ShapeVector& v);

class SyntheticObjective final : public Objective {
public:
    explicit SyntheticObjective(SyntheticParams params) : params_(std::move(params)) {}
    const SyntheticParams& params() const { return params_; }

private:
    Kwh do_evaluate(const ShapeVector& x) override { return synthetic_value(params_, x); }
    SyntheticParams params_;
};

/// Counting pass-through with an optional hard evaluation cap. Its own
/// eval_count equals the number of forwarded calls; with a cap, the call that
/// would exceed it throws BudgetExceeded before reaching the inner objective.
class CountingObjective final : public Objective {
public:
    explicit CountingObjective(Objective& inner,
                               std::optional<std::int64_t> cap = std::nullopt)
        : inner_(inner), cap_(cap) {}

private:
    Kwh do_evaluate(const ShapeVector& x) override;
    Objective& inner_;
    std::optional<std::int64_t> cap_;
};

/// Opt-in memoizer: repeated points are served from cache and do not cost an
/// inner simulation. Off by default because the experiment counts simulations
/// the way a real pipeline pays for them.
class MemoizingObjective final : public Objective {
public:
    explicit MemoizingObjective(Objective& inner) : inner_(inner) {}
    std::size_t cache_size() const { return cache_.size(); }

private:
    Kwh do_evaluate(const ShapeVector& x) override;
    Objective& inner_;
    std::map<std::vector<double>, Kwh> cache_;
};

}  // namespace shapebench

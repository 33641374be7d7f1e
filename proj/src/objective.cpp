#include "shapebench/objective.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "shapebench/errors.hpp"

namespace shapebench {

Kwh loads_to_kwh(const ZoneLoads& loads) {
    for (double q : {loads.q_heat, loads.q_cool, loads.e_light_fans}) {
        if (!std::isfinite(q) || q < 0.0) {
            throw ContractViolation("loads_to_kwh: loads must be finite and non-negative");
        }
    }
    return (loads.q_heat + loads.q_cool + loads.e_light_fans) / 3.6e6;
}

ShapeVector SyntheticParams::default_target(int n) {
    if (n == 4) {
        const double d = 1.6;
        return ShapeVector{2.0 * d, -1.0 * d, -3.0 * d, 2.0 * d};
    }
    return ShapeVector(std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

void SyntheticParams::validate(const SpaceSpec& space) const {
    if (!(quad_weight > 0.0)) throw ConfigError("synthetic.quad_weight must be > 0");
    if (!(rugged_amplitude >= 0.0)) throw ConfigError("synthetic.rugged_amplitude must be >= 0");
    if (!(rugged_frequency > 0.0)) throw ConfigError("synthetic.rugged_frequency must be > 0");
    if (!(noise_sigma >= 0.0)) throw ConfigError("synthetic.noise_sigma must be >= 0");
    if (!std::isfinite(baseline_kwh)) throw ConfigError("synthetic.baseline_kwh must be finite");
    if (target.size() != static_cast<std::size_t>(space.n)) {
        throw ConfigError("synthetic.target must have length space.n = " +
                          std::to_string(space.n));
    }
    if (!is_feasible(space, target)) {
        throw ConfigError("synthetic.target must be feasible in the configured space");
    }
}

namespace {

// Standard normal keyed by (seed, exact bits of v): hash the components with
// splitmix64, then one Box-Muller transform.
double keyed_noise(std::uint64_t seed, const ShapeVector& v) {
    std::uint64_t h = splitmix64(seed);
    for (double x : v.values) {
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(x));
    }
    const double u1 = static_cast<double>(h >> 11) * 0x1.0p-53;
    h = splitmix64(h);
    const double u2 = static_cast<double>(h >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log1p(-u1));  // u1 < 1, so log1p(-u1) is finite
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Kwh synthetic_value(const SyntheticParams& params, const ShapeVector& v) {
    if (v.size() != params.target.size()) {
        throw ContractViolation("synthetic_value: vector length " + std::to_string(v.size()) +
                                " != target length " + std::to_string(params.target.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - params.target[i];
        acc += params.quad_weight * d * d;
        acc += params.rugged_amplitude * (1.0 - std::cos(params.rugged_frequency * d));
    }
    double f = params.baseline_kwh + acc;
    if (params.noise_sigma > 0.0) {
        f += params.noise_sigma * keyed_noise(params.noise_seed, v);
    }
    return f;
}

Kwh CountingObjective::do_evaluate(const ShapeVector& x) {
    if (cap_ && eval_count() >= *cap_) {
        throw BudgetExceeded("evaluation budget of " + std::to_string(*cap_) + " exhausted");
    }
    return inner_.evaluate(x);
}

Kwh MemoizingObjective::do_evaluate(const ShapeVector& x) {
    auto it = cache_.find(x.values);
    if (it != cache_.end()) return it->second;
    const Kwh f = inner_.evaluate(x);
    cache_.emplace(x.values, f);
    return f;
}

}  // namespace shapebench

#include "shapebench/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapebench/errors.hpp"

namespace shapebench {

void SpaceSpec::validate() const {
    if (n < 2) throw ConfigError("space.n must be >= 2, got " + std::to_string(n));
    if (!(bound > 0.0) || !std::isfinite(bound)) {
        throw ConfigError("space.bound must be positive and finite");
    }
    if (!(zero_sum_tol >= 0.0) || !std::isfinite(zero_sum_tol)) {
        throw ConfigError("space.zero_sum_tol must be >= 0 and finite");
    }
    if (!(grid.step > 0.0) || !std::isfinite(grid.step)) {
        throw ConfigError("space.grid.step must be positive and finite");
    }
    if (!std::isfinite(grid.anchor)) throw ConfigError("space.grid.anchor must be finite");
}

std::vector<double> SpaceSpec::axis_values() const {
    // Candidate j range padded by 2 on each side; the exact |value| <= bound
    // filter decides membership, matching is_feasible's bound test bit for bit.
    const double span = (bound + std::abs(grid.anchor)) / grid.step;
    const long long j_lo = static_cast<long long>(-std::ceil(span)) - 2;
    const long long j_hi = static_cast<long long>(std::ceil(span)) + 2;
    std::vector<double> out;
    for (long long j = j_lo; j <= j_hi; ++j) {
        const double v = grid.anchor + static_cast<double>(j) * grid.step;
        if (std::abs(v) <= bound) out.push_back(v);
    }
    return out;
}

SpaceSpec make_space(int n, double bound, GridSpec grid, std::optional<double> zero_sum_tol) {
    SpaceSpec space;
    space.n = n;
    space.bound = bound;
    space.zero_sum_tol =
        zero_sum_tol ? *zero_sum_tol : SpaceSpec::default_zero_sum_tol(n, bound);
    space.grid = grid;
    space.validate();
    return space;
}

bool is_feasible(const SpaceSpec& space, const ShapeVector& v) {
    if (v.size() != static_cast<std::size_t>(space.n)) {
        throw ContractViolation("is_feasible: vector has length " + std::to_string(v.size()) +
                                ", space dimension is " + std::to_string(space.n));
    }
    for (double x : v.values) {
        if (!(std::abs(x) <= space.bound)) return false;  // NaN fails here
    }
    return std::abs(v.sum()) <= space.zero_sum_tol;
}

ShapeVector sample_uniform(const SpaceSpec& space, Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(space.n);
    ShapeVector v;
    v.values.resize(n);
    for (;;) {
        double partial = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            v.values[i] = rng.uniform(-space.bound, space.bound);
            partial += v.values[i];
        }
        const double last = -partial;
        if (std::abs(last) <= space.bound) {
            v.values[n - 1] = last;
            return v;
        }
    }
}

ShapeVector repair(const SpaceSpec& space, const ShapeVector& v, Rng& rng) {
    if (v.size() != static_cast<std::size_t>(space.n)) {
        throw ContractViolation("repair: dimension mismatch");
    }
    if (is_feasible(space, v)) return v;

    ShapeVector w = v;
    const double inv_n = 1.0 / static_cast<double>(space.n);
    for (int round = 0; round < 100; ++round) {
        for (double& x : w.values) x = std::clamp(x, -space.bound, space.bound);
        const double mean = w.sum() * inv_n;
        for (double& x : w.values) x -= mean;
        if (is_feasible(space, w)) return w;
    }
    return sample_uniform(space, rng);
}

std::vector<ShapeVector> grid_points(const SpaceSpec& space) {
    space.validate();
    const std::vector<double> axis = space.axis_values();
    std::vector<ShapeVector> out;
    if (!axis.empty()) {
        const std::size_t n = static_cast<std::size_t>(space.n);
        std::vector<std::size_t> idx(n, 0);
        ShapeVector point;
        point.values.resize(n);
        // Odometer with the last axis fastest: lexicographic ascending tuples.
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) point.values[i] = axis[idx[i]];
            if (is_feasible(space, point)) out.push_back(point);
            std::size_t pos = n;
            while (pos > 0) {
                --pos;
                if (++idx[pos] < axis.size()) break;
                idx[pos] = 0;
            }
            if (pos == 0 && idx[0] == 0) break;
        }
    }
    if (out.empty()) {
        throw EmptyGridError("grid_points: no feasible lattice point for step=" +
                             std::to_string(space.grid.step) +
                             " anchor=" + std::to_string(space.grid.anchor));
    }
    return out;
}

}  // namespace shapebench

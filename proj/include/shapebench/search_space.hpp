#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "shapebench/rng.hpp"

namespace shapebench {

/// Design decision vector: n signed wall offsets in feet. Feasible vectors
/// sum to (approximately) zero and stay inside the +-bound box.
struct ShapeVector {
    std::vector<double> values;

    ShapeVector() = default;
    explicit ShapeVector(std::vector<double> v) : values(std::move(v)) {}
    ShapeVector(std::initializer_list<double> v) : values(v) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Left-to-right component sum.
    double sum() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }

    friend bool operator==(const ShapeVector&, const ShapeVector&) = default;
};

/// Uniform lattice on every axis: values anchor + j*step, restricted to the box.
struct GridSpec {
    double step = 1.6;
    double anchor = 0.0;
};

/// The feasible region: the zero-sum slice of [-bound, +bound]^n, plus the
/// grid lattice used by Grid Search.
struct SpaceSpec {
    int n = 4;
    double bound = 11.5;
    /// Absolute tolerance on |sum| for feasibility. Defaulted by make_space.
    double zero_sum_tol = default_zero_sum_tol(4, 11.5);
    GridSpec grid;

    static double default_zero_sum_tol(int n, double bound) { return 1e-9 * n * bound; }

    /// The lattice values one axis can take, ascending. Empty for a
    /// pathological anchor/step combination.
    std::vector<double> axis_values() const;

    /// Throws ConfigError on an invalid spec (n < 2, bound <= 0, ...).
    void validate() const;
};

/// Validated construction; zero_sum_tol defaults to 1e-9 * n * bound.
SpaceSpec make_space(int n, double bound, GridSpec grid = {},
                     std::optional<double> zero_sum_tol = std::nullopt);

/// |sum| <= zero_sum_tol and every component in [-bound, +bound].
/// Throws ContractViolation on dimension mismatch.
bool is_feasible(const SpaceSpec& space, const ShapeVector& v);

/// Exactly uniform draw from the feasible polytope: first n-1 components
/// uniform in [-bound, +bound], last component the negated partial sum,
/// rejected and redrawn while the last component is out of bounds.
ShapeVector sample_uniform(const SpaceSpec& space, Rng& rng);

/// Restores feasibility: iterate {clamp to the box; subtract the component
/// mean} until feasible, up to 100 rounds, then fall back to sample_uniform.
/// Feasible inputs are returned unchanged, which makes repair idempotent.
ShapeVector repair(const SpaceSpec& space, const ShapeVector& v, Rng& rng);

/// Every feasible lattice point, in lexicographic order of component values.
/// Throws EmptyGridError when no lattice point is feasible.
std::vector<ShapeVector> grid_points(const SpaceSpec& space);

}  // namespace shapebench

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapebench/objective.hpp"
#include "shapebench/search_space.hpp"

namespace shapebench {

enum class FillStrategy { equal_split };

std::string to_string(FillStrategy f);

struct SliceCell {
    double xi = 0.0;
    double xj = 0.0;
    std::optional<Kwh> f;  // empty when the filled vector is infeasible
};

/// A resolution x resolution lattice over two axes of the feasible space,
/// row-major with axis_i outermost.
struct SliceTable {
    int axis_i = 0;  // 0-based
    int axis_j = 1;
    int resolution = 0;
    FillStrategy fill = FillStrategy::equal_split;
    std::vector<SliceCell> cells;

    const SliceCell& at(int row, int col) const {
        return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution) +
                     static_cast<std::size_t>(col)];
    }
};

/// Evaluates f over (x_i, x_j) in [-bound, bound]^2 at `resolution` points per
/// axis. The remaining n-2 components each take -(x_i + x_j)/(n-2), restoring
/// the zero sum; cells whose filled vector leaves the box are emitted missing.
SliceTable slice_grid(const SpaceSpec& space, Objective& obj, int axis_i, int axis_j,
                      int resolution, FillStrategy fill = FillStrategy::equal_split);

/// Present cells strictly smaller than all present 8-neighbors.
int count_local_minima(const SliceTable& slice);

}  // namespace shapebench

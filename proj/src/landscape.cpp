#include "shapebench/landscape.hpp"

#include <cmath>
#include <string>

#include "shapebench/errors.hpp"

namespace shapebench {

std::string to_string(FillStrategy f) {
    switch (f) {
        case FillStrategy::equal_split: return "equal_split";
    }
    return "?";
}

SliceTable slice_grid(const SpaceSpec& space, Objective& obj, int axis_i, int axis_j,
                      int resolution, FillStrategy fill) {
    space.validate();
    if (axis_i == axis_j) throw ContractViolation("slice_grid: axes must differ");
    if (axis_i < 0 || axis_i >= space.n || axis_j < 0 || axis_j >= space.n) {
        throw ContractViolation("slice_grid: axis out of [0, n)");
    }
    if (resolution < 2) throw ContractViolation("slice_grid: resolution must be >= 2");
    if (space.n == 2 && fill == FillStrategy::equal_split) {
        throw ContractViolation("slice_grid: equal-split fill needs n > 2");
    }

    const std::size_t n = static_cast<std::size_t>(space.n);
    std::vector<double> axis(static_cast<std::size_t>(resolution));
    const double step = 2.0 * space.bound / static_cast<double>(resolution - 1);
    for (int k = 0; k < resolution; ++k) {
        axis[static_cast<std::size_t>(k)] = -space.bound + static_cast<double>(k) * step;
    }

    SliceTable table;
    table.axis_i = axis_i;
    table.axis_j = axis_j;
    table.resolution = resolution;
    table.fill = fill;
    table.cells.reserve(axis.size() * axis.size());

    ShapeVector point;
    point.values.resize(n);
    for (double vi : axis) {
        for (double vj : axis) {
            const double spread = -(vi + vj) / static_cast<double>(space.n - 2);
            for (double& x : point.values) x = spread;
            point.values[static_cast<std::size_t>(axis_i)] = vi;
            point.values[static_cast<std::size_t>(axis_j)] = vj;
            SliceCell cell{vi, vj, std::nullopt};
            if (is_feasible(space, point)) cell.f = obj.evaluate(point);
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

int count_local_minima(const SliceTable& slice) {
    const int r = slice.resolution;
    int count = 0;
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            const SliceCell& c = slice.at(a, b);
            if (!c.f) continue;
            bool strict_min = true;
            for (int da = -1; da <= 1 && strict_min; ++da) {
                for (int db = -1; db <= 1 && strict_min; ++db) {
                    if (da == 0 && db == 0) continue;
                    const int aa = a + da, bb = b + db;
                    if (aa < 0 || aa >= r || bb < 0 || bb >= r) continue;
                    const SliceCell& nb = slice.at(aa, bb);
                    if (nb.f && !(*c.f < *nb.f)) strict_min = false;
                }
            }
            if (strict_min) ++count;
        }
    }
    return count;
}

}  // namespace shapebench

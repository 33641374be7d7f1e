#include <doctest.h>

#include <cmath>

#include "shapebench/errors.hpp"
#include "shapebench/landscape.hpp"
#include "shapebench/objective.hpp"

#include "oracles.hpp"

using namespace shapebench;

namespace {

SliceTable default_slice(int resolution, double rugged_amplitude = 6.0) {
    SyntheticParams p;
    p.rugged_amplitude = rugged_amplitude;
    SyntheticObjective obj{p};
    return slice_grid(make_space(4, 11.5), obj, 0, 1, resolution);
}

}  // namespace

TEST_CASE("slice_grid validates its arguments") {
    SyntheticObjective obj{SyntheticParams{}};
    const SpaceSpec s = make_space(4, 11.5);
    CHECK_THROWS_AS(slice_grid(s, obj, 1, 1, 10), ContractViolation);
    CHECK_THROWS_AS(slice_grid(s, obj, 0, 4, 10), ContractViolation);
    CHECK_THROWS_AS(slice_grid(s, obj, -1, 1, 10), ContractViolation);
    CHECK_THROWS_AS(slice_grid(s, obj, 0, 1, 1), ContractViolation);

    SyntheticParams p2;
    p2.target = ShapeVector{{0.0, 0.0}};
    SyntheticObjective obj2{p2};
    CHECK_THROWS_AS(slice_grid(make_space(2, 11.5), obj2, 0, 1, 10), ContractViolation);
}

TEST_CASE("a resolution-3 slice has nine cells spanning the box") {
    const SliceTable t = default_slice(3);
    REQUIRE(t.cells.size() == 9);
    CHECK(t.at(0, 0).xi == -11.5);
    CHECK(t.at(0, 0).xj == -11.5);
    CHECK(t.at(2, 2).xi == 11.5);
    CHECK(t.at(1, 1).xi == 0.0);

    // n=4: the equal split keeps every cell feasible, including the corner,
    // whose fill components are exactly -11.5.
    for (const SliceCell& c : t.cells) CHECK(c.f.has_value());
}

TEST_CASE("equal-split fill restores the zero sum") {
    SyntheticParams p;
    p.target = SyntheticParams::default_target(5);
    SyntheticObjective obj{p};
    const SpaceSpec s = make_space(5, 8.0);
    const SliceTable t = slice_grid(s, obj, 1, 3, 7);
    for (const SliceCell& c : t.cells) {
        if (!c.f) continue;
        const double spread = -(c.xi + c.xj) / 3.0;
        ShapeVector v{{spread, c.xi, spread, c.xj, spread}};
        CHECK(is_feasible(s, v));
        SyntheticObjective probe{p};
        CHECK(probe.evaluate(v) == *c.f);
    }
}

TEST_CASE("cells whose fill leaves the box are missing") {
    SyntheticParams p;
    p.target = ShapeVector{{0.0, 0.0, 0.0}};
    SyntheticObjective obj{p};
    const SliceTable t = slice_grid(make_space(3, 11.5), obj, 0, 1, 3);
    CHECK_FALSE(t.at(2, 2).f.has_value());  // fill would be -23
    CHECK_FALSE(t.at(0, 0).f.has_value());  // fill would be +23
    CHECK(t.at(0, 2).f.has_value());        // fill is 0
    CHECK(t.at(1, 1).f.has_value());
}

TEST_CASE("slices are deterministic") {
    const SliceTable a = default_slice(20);
    const SliceTable b = default_slice(20);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].f == b.cells[i].f);
    }
}

TEST_CASE("count_local_minima on hand-built tables") {
    SliceTable constant;
    constant.resolution = 3;
    for (int i = 0; i < 9; ++i) constant.cells.push_back(SliceCell{0, 0, 5.0});
    CHECK(count_local_minima(constant) == 0);

    SliceTable bowl;
    bowl.resolution = 3;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double f = (a - 1) * (a - 1) + (b - 1) * (b - 1);
            bowl.cells.push_back(SliceCell{0, 0, f});
        }
    }
    CHECK(count_local_minima(bowl) == 1);
}

TEST_CASE("count_local_minima matches a naive scan oracle") {
    const SliceTable t = default_slice(50);
    const int r = t.resolution;
    std::vector<std::vector<double>> grid(static_cast<std::size_t>(r),
                                          std::vector<double>(static_cast<std::size_t>(r)));
    std::vector<std::vector<bool>> present(static_cast<std::size_t>(r),
                                           std::vector<bool>(static_cast<std::size_t>(r)));
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            const SliceCell& c = t.at(a, b);
            present[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = c.f.has_value();
            if (c.f) grid[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = *c.f;
        }
    }
    CHECK(count_local_minima(t) == oracles::naive_count_minima(grid, present));
}

TEST_CASE("the default landscape slice is multimodal, the quadratic one is not") {
    CHECK(count_local_minima(default_slice(50)) == 44);      // frozen scan-oracle value
    CHECK(count_local_minima(default_slice(50)) >= 2);       // the property that matters
    CHECK(count_local_minima(default_slice(50, 0.0)) == 1);  // pure quadratic bowl
}

#include "gaitnav/costmap.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace gaitnav;

namespace {

BinaryGrid empty_grid(int w, int h)
{
    BinaryGrid g;
    g.width = w;
    g.height = h;
    g.cells.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
    return g;
}

// brute-force nearest-obstacle scan
double brute_distance(const BinaryGrid& g, int ix, int iy)
{
    double best = std::numeric_limits<double>::infinity();
    for (int oy = 0; oy < g.height; ++oy) {
        for (int ox = 0; ox < g.width; ++ox) {
            if (g.at(ox, oy)) {
                const double dx = ix - ox;
                const double dy = iy - oy;
                best = std::min(best, std::sqrt(dx * dx + dy * dy));
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("build_cost_map on an obstacle-free grid")
{
    const auto map = build_cost_map(empty_grid(8, 5), 1.0, CostMapParams{});
    for (int iy = 0; iy < 5; ++iy) {
        for (int ix = 0; ix < 8; ++ix) {
            CHECK(map.cost({ix, iy}) == 0.0);
            CHECK(!map.occupied({ix, iy}));
        }
    }
}

TEST_CASE("single obstacle cell has peak cost and is occupied")
{
    auto grid = empty_grid(9, 9);
    grid.set(4, 4, 1);
    CostMapParams params;
    params.lambda = 2.0;
    const auto map = build_cost_map(grid, 1.0, params);
    CHECK(map.cost({4, 4}) == doctest::Approx(params.c_max));
    CHECK(map.occupied({4, 4}));
    CHECK(map.cost({0, 0}) < map.cost({3, 4}));
}

TEST_CASE("occupancy radius matches the closed form")
{
    // d_occ = ln(c_max / occ_threshold) / lambda = ln(100/60)/0.5 ~ 1.0217
    auto grid = empty_grid(21, 21);
    grid.set(10, 10, 1);
    CostMapParams params;
    params.c_max = 100.0;
    params.lambda = 0.5;
    params.occ_threshold = 60.0;
    const auto map = build_cost_map(grid, 1.0, params);
    const double d_occ = std::log(100.0 / 60.0) / 0.5;
    CHECK(d_occ == doctest::Approx(1.0217).epsilon(1e-3));
    for (int iy = 0; iy < 21; ++iy) {
        for (int ix = 0; ix < 21; ++ix) {
            const double d = brute_distance(grid, ix, iy);
            CHECK(map.occupied({ix, iy}) == (d <= d_occ));
            // occupied <=> cost >= threshold
            CHECK(map.occupied({ix, iy}) == (map.cost({ix, iy}) >= params.occ_threshold));
        }
    }
}

TEST_CASE("distance transform is exact on random grids")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto grid = oracles::random_grid(23, 17, 0.15, 100 + seed);
        const auto d2 = squared_distance_transform(grid);
        for (int iy = 0; iy < grid.height; ++iy) {
            for (int ix = 0; ix < grid.width; ++ix) {
                const double want = brute_distance(grid, ix, iy);
                const double got =
                    std::sqrt(d2[static_cast<std::size_t>(iy) * grid.width + ix]);
                if (std::isinf(want)) {
                    CHECK(std::isinf(got));
                } else {
                    CHECK(got == doctest::Approx(want).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("cost is monotone in obstacle distance")
{
    const auto grid = oracles::random_grid(30, 30, 0.1, 77);
    const auto map = build_cost_map(grid, 1.0, CostMapParams{});
    const auto d2 = squared_distance_transform(grid);
    for (int i = 0; i < 30 * 30; ++i) {
        for (int j = i + 1; j < 30 * 30; ++j) {
            if (d2[static_cast<std::size_t>(i)] <= d2[static_cast<std::size_t>(j)]) {
                CHECK(map.cost({i % 30, i / 30}) >= map.cost({j % 30, j / 30}));
            }
        }
    }
}

TEST_CASE("larger lambda never grows the occupied set")
{
    const auto grid = oracles::random_grid(25, 25, 0.12, 33);
    CostMapParams slow;
    slow.lambda = 0.2;
    CostMapParams fast;
    fast.lambda = 0.9;
    const auto map_slow = build_cost_map(grid, 1.0, slow);
    const auto map_fast = build_cost_map(grid, 1.0, fast);
    for (int iy = 0; iy < 25; ++iy) {
        for (int ix = 0; ix < 25; ++ix) {
            if (map_fast.occupied({ix, iy})) {
                CHECK(map_slow.occupied({ix, iy}));
            }
        }
    }
}

TEST_CASE("bad parameters are rejected")
{
    CostMapParams p;
    p.c_max = 50.0;
    p.occ_threshold = 60.0;
    CHECK_THROWS_AS(build_cost_map(empty_grid(3, 3), 1.0, p), BadParamsError);
    CostMapParams q;
    q.lambda = 0.0;
    CHECK_THROWS_AS(build_cost_map(empty_grid(3, 3), 1.0, q), BadParamsError);
    CHECK_THROWS_AS(build_cost_map(BinaryGrid{}, 1.0, CostMapParams{}), BadParamsError);
    CHECK_THROWS_AS(build_cost_map(empty_grid(3, 3), 0.0, CostMapParams{}), BadParamsError);
}

TEST_CASE("cost_to_go basics on an empty 3x3 grid")
{
    const auto map = build_cost_map(empty_grid(3, 3), 2.0, CostMapParams{});
    const auto field = cost_to_go(map, {3.0, 3.0});  // center cell (1,1)
    CHECK(field.goal() == Cell{1, 1});
    CHECK(field.value({1, 1}) == 0.0);
    const double res = 2.0;
    CHECK(field.value({0, 1}) == doctest::Approx(res));
    CHECK(field.value({1, 0}) == doctest::Approx(res));
    CHECK(field.value({0, 0}) == doctest::Approx(std::sqrt(2.0) * res));
    CHECK(field.value({2, 2}) == doctest::Approx(std::sqrt(2.0) * res));
    CHECK(field.value_at(5.0, 3.0) == doctest::Approx(res));
    CHECK(std::isinf(field.value_at(-1.0, 0.0)));
}

TEST_CASE("cost_to_go rejects occupied goals")
{
    auto grid = empty_grid(5, 5);
    grid.set(2, 2, 1);
    CostMapParams params;
    params.lambda = 3.0;
    const auto map = build_cost_map(grid, 1.0, params);
    CHECK_THROWS_AS(cost_to_go(map, {2.5, 2.5}), GoalOccupiedError);
    CHECK_THROWS_AS(cost_to_go(map, {-3.0, 1.0}), GoalOccupiedError);
}

TEST_CASE("cost_to_go matches the relaxation reference on random maps")
{
    int checked_cells = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto grid = oracles::random_grid(50, 50, 0.2, 4000 + seed);
        CostMapParams params;
        params.lambda = 2.5;  // tight decay: mostly the raw obstacles
        const auto map = build_cost_map(grid, 1.0, params);

        // first free cell as goal
        Cell goal{-1, -1};
        for (int iy = 0; iy < 50 && goal.ix < 0; ++iy) {
            for (int ix = 0; ix < 50 && goal.ix < 0; ++ix) {
                if (!map.occupied({ix, iy})) {
                    goal = {ix, iy};
                }
            }
        }
        REQUIRE(goal.ix >= 0);
        const auto field = cost_to_go(map, {goal.ix + 0.5, goal.iy + 0.5});
        const auto ref = oracles::relaxation_cost_to_go(map, goal);
        for (int iy = 0; iy < 50; ++iy) {
            for (int ix = 0; ix < 50; ++ix) {
                const double want = ref[static_cast<std::size_t>(iy) * 50 + ix];
                const double got = field.value({ix, iy});
                if (std::isinf(want)) {
                    CHECK(std::isinf(got));
                } else {
                    CHECK(std::abs(got - want) < 1e-9);
                    ++checked_cells;
                }
            }
        }
    }
    CHECK(checked_cells > 1000);
}

TEST_CASE("cost_to_go satisfies the Bellman fixed point")
{
    const auto grid = oracles::random_grid(40, 40, 0.15, 909);
    CostMapParams params;
    params.lambda = 1.5;
    const auto map = build_cost_map(grid, 1.0, params);
    Cell goal{-1, -1};
    for (int iy = 39; iy >= 0 && goal.ix < 0; --iy) {
        for (int ix = 39; ix >= 0 && goal.ix < 0; --ix) {
            if (!map.occupied({ix, iy})) {
                goal = {ix, iy};
            }
        }
    }
    REQUIRE(goal.ix >= 0);
    const auto field = cost_to_go(map, {goal.ix + 0.5, goal.iy + 0.5});
    for (int iy = 0; iy < 40; ++iy) {
        for (int ix = 0; ix < 40; ++ix) {
            const Cell c{ix, iy};
            if (map.occupied(c) || !field.reachable(c) || (c == goal)) {
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    const Cell nb{ix + dx, iy + dy};
                    if (!map.in_bounds(nb) || map.occupied(nb)) {
                        continue;
                    }
                    const double step = (dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0;
                    best = std::min(best, field.value(nb) + step);
                }
            }
            CHECK(field.value(c) == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("is_collision")
{
    auto grid = empty_grid(10, 10);
    grid.set(5, 5, 1);
    CostMapParams params;
    params.lambda = 5.0;  // tiny dilation
    const auto map = build_cost_map(grid, 1.0, params);
    CHECK(is_collision(map, 5.5, 5.5));     // on the obstacle
    CHECK(is_collision(map, -0.1, 3.0));    // out of bounds
    CHECK(is_collision(map, 3.0, 10.01));   // out of bounds
    CHECK(!is_collision(map, 0.5, 0.5));    // far free space
}

#include "gaitnav/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace gaitnav {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// large finite stand-in inside the distance transform (avoids inf - inf)
constexpr double kFar = 1e20;
}  // namespace

void CostMapParams::validate() const
{
    if (!(c_max > occ_threshold) || !(occ_threshold > 0.0)) {
        throw BadParamsError("require c_max > occ_threshold > 0");
    }
    if (!(lambda > 0.0)) {
        throw BadParamsError("require lambda > 0");
    }
}

CostMap::CostMap(int width, int height, double resolution, CostMapParams params,
                 std::vector<double> cost, std::vector<std::uint8_t> occupied)
    : width_(width),
      height_(height),
      resolution_(resolution),
      params_(params),
      cost_(std::move(cost)),
      occupied_(std::move(occupied))
{
}

Cell CostMap::cell_of(double x, double y) const
{
    return {static_cast<int>(std::floor(x / resolution_)),
            static_cast<int>(std::floor(y / resolution_))};
}

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas, one scanline.
void dt_1d(const std::vector<double>& f, int n, std::vector<double>& d,
           std::vector<int>& v, std::vector<double>& z)
{
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < n; ++q) {
        double s = ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                    (f[static_cast<std::size_t>(v[static_cast<std::size_t>(k)])] +
                     static_cast<double>(v[static_cast<std::size_t>(k)]) * v[static_cast<std::size_t>(k)])) /
                   (2.0 * (q - v[static_cast<std::size_t>(k)]));
        while (s <= z[static_cast<std::size_t>(k)]) {
            --k;
            s = ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                 (f[static_cast<std::size_t>(v[static_cast<std::size_t>(k)])] +
                  static_cast<double>(v[static_cast<std::size_t>(k)]) * v[static_cast<std::size_t>(k)])) /
                (2.0 * (q - v[static_cast<std::size_t>(k)]));
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k) + 1] < static_cast<double>(q)) {
            ++k;
        }
        const int vk = v[static_cast<std::size_t>(k)];
        d[static_cast<std::size_t>(q)] =
            static_cast<double>(q - vk) * (q - vk) + f[static_cast<std::size_t>(vk)];
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const BinaryGrid& grid)
{
    const int w = grid.width;
    const int h = grid.height;
    std::vector<double> d2(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            d2[static_cast<std::size_t>(iy) * w + ix] = grid.at(ix, iy) ? 0.0 : kFar;
        }
    }

    const int nmax = std::max(w, h);
    std::vector<double> f(static_cast<std::size_t>(nmax));
    std::vector<double> out(static_cast<std::size_t>(nmax));
    std::vector<int> v(static_cast<std::size_t>(nmax));
    std::vector<double> z(static_cast<std::size_t>(nmax) + 1);

    // columns, then rows
    for (int ix = 0; ix < w; ++ix) {
        for (int iy = 0; iy < h; ++iy) {
            f[static_cast<std::size_t>(iy)] = d2[static_cast<std::size_t>(iy) * w + ix];
        }
        dt_1d(f, h, out, v, z);
        for (int iy = 0; iy < h; ++iy) {
            d2[static_cast<std::size_t>(iy) * w + ix] = out[static_cast<std::size_t>(iy)];
        }
    }
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            f[static_cast<std::size_t>(ix)] = d2[static_cast<std::size_t>(iy) * w + ix];
        }
        dt_1d(f, w, out, v, z);
        for (int ix = 0; ix < w; ++ix) {
            d2[static_cast<std::size_t>(iy) * w + ix] = out[static_cast<std::size_t>(ix)];
        }
    }

    for (auto& val : d2) {
        if (val >= kFar / 2.0) {
            val = kInf;
        }
    }
    return d2;
}

CostMap build_cost_map(const BinaryGrid& obstacles, double resolution,
                       const CostMapParams& params)
{
    params.validate();
    if (obstacles.width <= 0 || obstacles.height <= 0 ||
        obstacles.cells.size() != static_cast<std::size_t>(obstacles.width) *
                                      static_cast<std::size_t>(obstacles.height)) {
        throw BadParamsError("obstacle grid must be nonempty and consistent");
    }
    if (!(resolution > 0.0)) {
        throw BadParamsError("resolution must be > 0");
    }

    const auto d2 = squared_distance_transform(obstacles);
    std::vector<double> cost(d2.size());
    std::vector<std::uint8_t> occ(d2.size());
    for (std::size_t i = 0; i < d2.size(); ++i) {
        if (std::isinf(d2[i])) {
            cost[i] = 0.0;
        } else {
            const double d = std::sqrt(d2[i]) * resolution;
            cost[i] = params.c_max * std::exp(-params.lambda * d);
        }
        occ[i] = cost[i] >= params.occ_threshold ? 1 : 0;
    }
    return CostMap(obstacles.width, obstacles.height, resolution, params,
                   std::move(cost), std::move(occ));
}

CostToGoField::CostToGoField(int width, int height, double resolution, Cell goal,
                             std::vector<double> value)
    : width_(width), height_(height), resolution_(resolution), goal_(goal),
      value_(std::move(value))
{
}

bool CostToGoField::reachable(Cell c) const
{
    return in_bounds(c) && std::isfinite(value(c));
}

double CostToGoField::value_at(double x, double y) const
{
    const Cell c{static_cast<int>(std::floor(x / resolution_)),
                 static_cast<int>(std::floor(y / resolution_))};
    if (!in_bounds(c)) {
        return kInf;
    }
    return value(c);
}

CostToGoField cost_to_go(const CostMap& map, const Eigen::Vector2d& goal)
{
    const Cell goal_cell = map.cell_of(goal.x(), goal.y());
    if (!map.in_bounds(goal_cell) || map.occupied(goal_cell)) {
        throw GoalOccupiedError("goal cell is occupied or outside the map");
    }

    const int w = map.width();
    const int h = map.height();
    const double res = map.resolution();
    const double diag = std::sqrt(2.0) * res;
    std::vector<double> value(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), kInf);

    auto idx = [w](int ix, int iy) {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(w) +
               static_cast<std::size_t>(ix);
    };

    using Entry = std::pair<double, int>;  // (distance, flat index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    value[idx(goal_cell.ix, goal_cell.iy)] = 0.0;
    frontier.emplace(0.0, static_cast<int>(idx(goal_cell.ix, goal_cell.iy)));

    while (!frontier.empty()) {
        const auto [dist, flat] = frontier.top();
        frontier.pop();
        if (dist > value[static_cast<std::size_t>(flat)]) {
            continue;
        }
        const int ix = flat % w;
        const int iy = flat / w;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) {
                    continue;
                }
                const Cell nb{ix + dx, iy + dy};
                if (!map.in_bounds(nb) || map.occupied(nb)) {
                    continue;
                }
                const double step = (dx != 0 && dy != 0) ? diag : res;
                const double cand = dist + step;
                if (cand < value[idx(nb.ix, nb.iy)]) {
                    value[idx(nb.ix, nb.iy)] = cand;
                    frontier.emplace(cand, static_cast<int>(idx(nb.ix, nb.iy)));
                }
            }
        }
    }
    return CostToGoField(w, h, res, goal_cell, std::move(value));
}

bool is_collision(const CostMap& map, double x, double y)
{
    const Cell c = map.cell_of(x, y);
    return !map.in_bounds(c) || map.occupied(c);
}

}  // namespace gaitnav

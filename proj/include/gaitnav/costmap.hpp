#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gaitnav {

struct BadParamsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GoalOccupiedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary obstacle layer, row-major, cell (ix, iy) with iy = 0 at the
// bottom of the world (y up).
struct BinaryGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;  // 1 = obstacle

    std::uint8_t at(int ix, int iy) const {
        return cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(ix)];
    }
    void set(int ix, int iy, std::uint8_t v) {
        cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(width) +
              static_cast<std::size_t>(ix)] = v;
    }
};

struct CostMapParams {
    double c_max = 100.0;
    double lambda = 0.25;        // decay rate, 1/grid-unit
    double occ_threshold = 60.0;

    void validate() const;  // c_max > occ_threshold > 0, lambda > 0
};

struct Cell {
    int ix = 0;
    int iy = 0;
    bool operator==(const Cell&) const = default;
};

// Obstacle costs decaying exponentially with Euclidean distance to the
// nearest obstacle cell, thresholded into occupied/free.
class CostMap {
public:
    CostMap(int width, int height, double resolution, CostMapParams params,
            std::vector<double> cost, std::vector<std::uint8_t> occupied);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    const CostMapParams& params() const { return params_; }

    bool in_bounds(Cell c) const {
        return c.ix >= 0 && c.ix < width_ && c.iy >= 0 && c.iy < height_;
    }
    Cell cell_of(double x, double y) const;

    double cost(Cell c) const { return cost_[index(c)]; }
    bool occupied(Cell c) const { return occupied_[index(c)] != 0; }

private:
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.iy) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.ix);
    }

    int width_;
    int height_;
    double resolution_;
    CostMapParams params_;
    std::vector<double> cost_;
    std::vector<std::uint8_t> occupied_;
};

// cost(cell) = c_max * exp(-lambda * d) with d the exact Euclidean
// distance (grid units) to the nearest obstacle cell; occupied where
// cost >= occ_threshold. An obstacle-free grid is all zero cost, all free.
CostMap build_cost_map(const BinaryGrid& obstacles, double resolution,
                       const CostMapParams& params);

// Exact squared Euclidean distance (in cells) to the nearest set cell;
// infinity when the grid has none. Exposed for the cost-map tests.
std::vector<double> squared_distance_transform(const BinaryGrid& grid);

// Shortest 8-connected path length to the goal cell over free cells
// (straight step 1, diagonal sqrt(2), in cells x resolution).
class CostToGoField {
public:
    CostToGoField(int width, int height, double resolution, Cell goal,
                  std::vector<double> value);

    Cell goal() const { return goal_; }
    double resolution() const { return resolution_; }

    bool in_bounds(Cell c) const {
        return c.ix >= 0 && c.ix < width_ && c.iy >= 0 && c.iy < height_;
    }
    // +infinity for occupied or unreachable cells.
    double value(Cell c) const {
        return value_[static_cast<std::size_t>(c.iy) * static_cast<std::size_t>(width_) +
                      static_cast<std::size_t>(c.ix)];
    }
    bool reachable(Cell c) const;
    double value_at(double x, double y) const;  // +infinity out of bounds

private:
    int width_;
    int height_;
    double resolution_;
    Cell goal_;
    std::vector<double> value_;
};

// Expanding-wavefront cost-to-go toward the cell containing `goal`.
// Throws GoalOccupiedError if that cell is occupied or out of bounds.
CostToGoField cost_to_go(const CostMap& map, const Eigen::Vector2d& goal);

// True iff the position's cell is occupied or out of bounds.
bool is_collision(const CostMap& map, double x, double y);

}  // namespace gaitnav

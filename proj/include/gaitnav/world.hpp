#pragma once

#include "gaitnav/costmap.hpp"
#include "gaitnav/se2.hpp"

#include <Eigen/Dense>

namespace gaitnav {

// One locomotion scenario: obstacle layer, cost-map parameters, start
// pose, goal position, and the goal acceptance radius.
struct World {
    BinaryGrid obstacles;
    double resolution = 1.0;
    CostMapParams params;
    Pose2 start;
    Eigen::Vector2d goal = Eigen::Vector2d::Zero();
    double delta_goal = 5.0;

    CostMap build_map() const { return build_cost_map(obstacles, resolution, params); }
};

}  // namespace gaitnav

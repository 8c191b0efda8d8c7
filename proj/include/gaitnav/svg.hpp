#pragma once

#include "gaitnav/closed_loop.hpp"
#include "gaitnav/costmap.hpp"
#include "gaitnav/lattice_planner.hpp"
#include "gaitnav/world.hpp"

#include <string>
#include <vector>

namespace gaitnav {

// Cost-map heat shading, per-gait exploration strokes, and the solution
// path.
std::string render_plan_svg(const World& world, const CostMap& map,
                            const TrajectoryPlan& plan, const ExplorationLog* exploration,
                            const std::vector<std::string>& gait_ids);

// Executed vs planned paths with gait-switch and replan markers, the
// abandoned plans, and the goal acceptance circle.
std::string render_run_svg(const World& world, const CostMap& map, const RunRecord& record);

// Same picture from a bare record CSV (no abandoned plans available).
std::string render_record_svg(const World& world, const CostMap& map,
                              const std::vector<CycleRecord>& cycles);

}  // namespace gaitnav

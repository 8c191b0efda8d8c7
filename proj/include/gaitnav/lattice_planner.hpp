#pragma once

#include "gaitnav/costmap.hpp"
#include "gaitnav/se2.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace gaitnav {

struct PlannerConfig {
    int n_t_max = 10;                 // max consecutive translation cycles
    double delta_goal = 5.0;          // goal acceptance radius, grid units
    int max_iterations = 1000;
    bool allow_zero_rotation = true;  // permit n_r = 0 expansions

    void validate() const;
};

struct StartInCollisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoFeasibleExpansionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoProgressError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IterationLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One rotate-then-translate pair: n_r rotation cycles, then n_t cycles
// of translation gait gait_index.
struct PlanStep {
    int n_r = 0;
    int gait_index = 0;
    int n_t = 0;
    Pose2 predicted_end;
};

struct Waypoint {
    int cycle = 0;        // 1-based cumulative cycle count
    Pose2 pose;
    std::string gait_id;  // gait executed during this cycle
    bool phase_end = false;  // last cycle of a rotation or translation phase
};

struct TrajectoryPlan {
    Pose2 start;
    std::vector<PlanStep> steps;
    std::vector<Waypoint> waypoints;  // one per cycle, chained from start

    int total_cycles() const { return static_cast<int>(waypoints.size()); }
};

// Optional record of every expansion the search evaluated, for rendering
// and for the per-iteration candidate-count bound.
struct ExplorationLog {
    struct Candidate {
        int iteration = 0;
        int n_r = 0;
        int gait_index = 0;
        int n_t = 0;
        std::vector<Pose2> poses;  // per-cycle, rotation then translation
        double cost_to_go = 0.0;   // +infinity when unreachable
    };
    std::vector<Candidate> candidates;
    std::vector<int> candidates_per_iteration;
};

// Greedy breadth-first search over rotate-then-translate gait sequences.
// Each iteration expands every candidate {n_r, i, n_t}, discards the ones
// whose per-cycle poses collide, and commits to the surviving end pose
// with the lowest cost-to-go. Ties: fewer total cycles, then smaller
// (n_r, i, n_t) lexicographically. Terminates once the committed pose is
// within delta_goal of the goal.
TrajectoryPlan plan(const Pose2& start, const Eigen::Vector2d& goal,
                    const GaitModel& rotation_gait,
                    const std::vector<GaitModel>& translation_gaits,
                    const CostMap& map, const CostToGoField& ctg,
                    const PlannerConfig& config, ExplorationLog* log = nullptr);

// plan() seeded at the current estimated pose; the cost-to-go field is
// reused (goal unchanged).
TrajectoryPlan replan(const Pose2& current, const Eigen::Vector2d& goal,
                      const GaitModel& rotation_gait,
                      const std::vector<GaitModel>& translation_gaits,
                      const CostMap& map, const CostToGoField& ctg,
                      const PlannerConfig& config, ExplorationLog* log = nullptr);

}  // namespace gaitnav

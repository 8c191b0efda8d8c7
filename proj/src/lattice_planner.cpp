#include "gaitnav/lattice_planner.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace gaitnav {

void PlannerConfig::validate() const
{
    if (n_t_max < 1) {
        throw std::invalid_argument("n_t_max must be >= 1");
    }
    if (!(delta_goal > 0.0)) {
        throw std::invalid_argument("delta_goal must be > 0");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be >= 1");
    }
}

namespace {

struct Candidate {
    int n_r = 0;
    int gait_index = 0;
    int n_t = 0;
    Pose2 end;
    double ctg = std::numeric_limits<double>::infinity();
    int total_cycles() const { return n_r + n_t; }
};

bool better(const Candidate& a, const Candidate& b)
{
    if (a.ctg != b.ctg) {
        return a.ctg < b.ctg;
    }
    if (a.total_cycles() != b.total_cycles()) {
        return a.total_cycles() < b.total_cycles();
    }
    if (a.n_r != b.n_r) {
        return a.n_r < b.n_r;
    }
    if (a.gait_index != b.gait_index) {
        return a.gait_index < b.gait_index;
    }
    return a.n_t < b.n_t;
}

void append_step_waypoints(TrajectoryPlan& plan, const Pose2& from,
                           const Candidate& cand, const GaitModel& rotation,
                           const std::vector<GaitModel>& translations)
{
    int cycle = plan.total_cycles();
    Pose2 pose = from;
    const CycleTwist& rot = rotation.twist;
    for (int k = 1; k <= cand.n_r; ++k) {
        pose = compose(pose, Pose2{rot.px, rot.py, rot.omega});
        plan.waypoints.push_back({++cycle, pose, rotation.id, k == cand.n_r});
    }
    const GaitModel& tr = translations[static_cast<std::size_t>(cand.gait_index)];
    for (int k = 1; k <= cand.n_t; ++k) {
        pose = compose(pose, Pose2{tr.twist.px, tr.twist.py, tr.twist.omega});
        plan.waypoints.push_back({++cycle, pose, tr.id, k == cand.n_t});
    }
    plan.steps.push_back(PlanStep{cand.n_r, cand.gait_index, cand.n_t, pose});
}

}  // namespace

TrajectoryPlan plan(const Pose2& start, const Eigen::Vector2d& goal,
                    const GaitModel& rotation_gait,
                    const std::vector<GaitModel>& translation_gaits,
                    const CostMap& map, const CostToGoField& ctg,
                    const PlannerConfig& config, ExplorationLog* log)
{
    config.validate();
    if (translation_gaits.empty()) {
        throw std::invalid_argument("at least one translation gait is required");
    }
    const int n_r_max = max_rotation_periods(rotation_gait.twist.omega);
    if (is_collision(map, start.x, start.y)) {
        throw StartInCollisionError("start pose is in collision");
    }

    TrajectoryPlan out;
    out.start = start;
    if ((start.position() - goal).norm() <= config.delta_goal) {
        return out;
    }

    Pose2 expand = start;
    double expand_ctg = ctg.value_at(start.x, start.y);
    const Pose2 rot_step{rotation_gait.twist.px, rotation_gait.twist.py,
                         rotation_gait.twist.omega};
    int stall = 0;

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        // rotation chain; a colliding rotation pose kills all longer n_r
        std::vector<Pose2> rot_chain{expand};
        for (int k = 1; k <= n_r_max; ++k) {
            const Pose2 next = compose(rot_chain.back(), rot_step);
            if (is_collision(map, next.x, next.y)) {
                break;
            }
            rot_chain.push_back(next);
        }

        std::optional<Candidate> best;
        int evaluated = 0;
        const int n_r_min = config.allow_zero_rotation ? 0 : 1;
        for (int n_r = n_r_min; n_r < static_cast<int>(rot_chain.size()); ++n_r) {
            for (int i = 0; i < static_cast<int>(translation_gaits.size()); ++i) {
                const CycleTwist& t = translation_gaits[static_cast<std::size_t>(i)].twist;
                const Pose2 t_step{t.px, t.py, t.omega};
                Pose2 pose = rot_chain[static_cast<std::size_t>(n_r)];
                std::vector<Pose2> segment;
                for (int n_t = 1; n_t <= config.n_t_max; ++n_t) {
                    pose = compose(pose, t_step);
                    if (is_collision(map, pose.x, pose.y)) {
                        break;
                    }
                    ++evaluated;
                    const double c = ctg.value_at(pose.x, pose.y);
                    if (log) {
                        segment.push_back(pose);
                        log->candidates.push_back({iter, n_r, i, n_t, segment, c});
                    }
                    if (!std::isfinite(c)) {
                        continue;  // free but cut off from the goal
                    }
                    const Candidate cand{n_r, i, n_t, pose, c};
                    if (!best || better(cand, *best)) {
                        best = cand;
                    }
                }
            }
        }
        if (log) {
            log->candidates_per_iteration.push_back(evaluated);
        }
        if (!best) {
            throw NoFeasibleExpansionError(
                "every rotate-then-translate expansion collides or cannot reach the goal");
        }

        const bool in_goal = (best->end.position() - goal).norm() <= config.delta_goal;
        if (best->ctg < expand_ctg || in_goal) {
            append_step_waypoints(out, expand, *best, rotation_gait, translation_gaits);
            expand = best->end;
            expand_ctg = best->ctg;
            stall = 0;
            if (in_goal) {
                return out;
            }
        } else if (++stall >= 2) {
            throw NoProgressError("greedy expansion stalled: best candidate cost-to-go " +
                                  std::to_string(best->ctg) + " >= current " +
                                  std::to_string(expand_ctg));
        }
    }
    throw IterationLimitError("no plan within " + std::to_string(config.max_iterations) +
                              " iterations");
}

TrajectoryPlan replan(const Pose2& current, const Eigen::Vector2d& goal,
                      const GaitModel& rotation_gait,
                      const std::vector<GaitModel>& translation_gaits,
                      const CostMap& map, const CostToGoField& ctg,
                      const PlannerConfig& config, ExplorationLog* log)
{
    return plan(current, goal, rotation_gait, translation_gaits, map, ctg, config, log);
}

}  // namespace gaitnav

#include "gaitnav/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace gaitnav {

NoiseModel::NoiseModel(std::uint64_t seed, double scale, double heavy_tail_scale)
    : rng_(seed), scale_(scale), heavy_tail_scale_(heavy_tail_scale)
{
    if (scale_ < 0.0 || heavy_tail_scale_ < 0.0) {
        throw std::invalid_argument("noise scales must be >= 0");
    }
}

Eigen::Vector3d NoiseModel::sample(const Eigen::Matrix3d& covariance)
{
    if (scale_ == 0.0) {
        return Eigen::Vector3d::Zero();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(covariance);
    const Eigen::Vector3d clamped = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix3d l = es.eigenvectors() * clamped.cwiseSqrt().asDiagonal();

    Eigen::Vector3d z;
    for (int i = 0; i < 3; ++i) {
        z(i) = normal_(rng_);
    }
    double s = scale_;
    if (heavy_tail_scale_ != 1.0 && uniform_(rng_) < 0.05) {
        s *= heavy_tail_scale_;
    }
    return s * (l * z);
}

Pose2 execute_cycle(const Pose2& state, const GaitModel& gait, NoiseModel& noise)
{
    const Eigen::Vector3d d = noise.sample(gait.covariance);
    return compose(state, Pose2{gait.twist.px + d(0), gait.twist.py + d(1),
                                gait.twist.omega + d(2)});
}

std::string to_string(ReplanMode mode)
{
    switch (mode) {
        case ReplanMode::kDisabled: return "none";
        case ReplanMode::kOnErrorThreshold: return "threshold";
        case ReplanMode::kFixedInterval: return "interval";
        case ReplanMode::kBoth: return "both";
    }
    return "?";
}

ReplanMode replan_mode_from_string(const std::string& s)
{
    if (s == "none" || s == "disabled") {
        return ReplanMode::kDisabled;
    }
    if (s == "threshold" || s == "on_error_threshold") {
        return ReplanMode::kOnErrorThreshold;
    }
    if (s == "interval" || s == "fixed_interval") {
        return ReplanMode::kFixedInterval;
    }
    if (s == "both") {
        return ReplanMode::kBoth;
    }
    throw std::invalid_argument("unknown replan mode: " + s);
}

void ReplanPolicy::validate() const
{
    if (uses_threshold() && !(error_threshold > 0.0)) {
        throw std::invalid_argument("error_threshold must be > 0 in threshold mode");
    }
    if (uses_interval() && interval < 1) {
        throw std::invalid_argument("interval must be >= 1 in fixed-interval mode");
    }
}

std::string to_string(CycleEvent e)
{
    switch (e) {
        case CycleEvent::kNone: return "none";
        case CycleEvent::kGaitSwitch: return "gait_switch";
        case CycleEvent::kReplan: return "replan";
    }
    return "?";
}

namespace {

struct LibraryModels {
    GaitModel rotation;
    std::vector<GaitModel> translations;
    std::unordered_map<std::string, GaitModel> by_id;
};

LibraryModels split_library(const std::vector<Gait>& library)
{
    LibraryModels out;
    bool have_rotation = false;
    for (const auto& gait : library) {
        GaitModel m = gait.model();
        m.id = gait.id;
        m.kind = gait.kind;
        if (!out.by_id.emplace(m.id, m).second) {
            throw std::invalid_argument("duplicate gait id '" + m.id + "' in library");
        }
        if (gait.kind == GaitKind::kRotation) {
            if (!have_rotation) {  // single rotation gait; extras ignored
                out.rotation = m;
                have_rotation = true;
            }
        } else {
            out.translations.push_back(m);
        }
    }
    if (!have_rotation || out.translations.empty()) {
        throw std::invalid_argument(
            "gait library needs a rotation gait and at least one translation gait");
    }
    return out;
}

}  // namespace

RunRecord run(const World& world, const std::vector<Gait>& library, const SimConfig& config)
{
    PlannerConfig planner_cfg = config.planner;
    // The world owns the acceptance radius. Plans target a radius tightened
    // by the error threshold so a robot that completes its plan on-plan is
    // already inside the acceptance circle.
    planner_cfg.delta_goal = world.delta_goal;
    if (config.policy.uses_threshold()) {
        planner_cfg.delta_goal = std::max(world.delta_goal - config.policy.error_threshold,
                                          0.5 * world.delta_goal);
    }
    planner_cfg.validate();
    config.policy.validate();
    if (config.cycle_budget < 1) {
        throw std::invalid_argument("cycle_budget must be >= 1");
    }
    const LibraryModels models = split_library(library);

    const CostMap map = world.build_map();
    const CostToGoField ctg = cost_to_go(map, world.goal);

    RunRecord rec;
    NoiseModel noise(config.seed, config.noise_scale, config.heavy_tail_scale);
    std::mt19937_64 obs_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> obs_gauss;

    MarkerTracker tracker(config.marker_template, TrackerConfig{});
    Pose2 true_pose = world.start;
    double elapsed_s = 0.0;

    auto observe = [&](int frame) -> Pose2 {
        if (config.feedback == FeedbackMode::kPerfect) {
            return true_pose;
        }
        MarkerObservation obs;
        obs.frame = frame;
        obs.t = elapsed_s;
        obs.points = project_markers(config.marker_template, true_pose);
        if (config.observation_noise > 0.0) {
            for (auto& p : obs.points) {
                p.x() += config.observation_noise * obs_gauss(obs_rng);
                p.y() += config.observation_noise * obs_gauss(obs_rng);
            }
        }
        if (config.emit_markers) {
            config.emit_markers->push_back(obs);
        }
        try {
            return tracker.update(obs).pose;
        } catch (const TrackingLostError& e) {
            throw TrackingLostRunError(e.what(), rec);
        } catch (const BootstrapError& e) {
            throw TrackingLostRunError(e.what(), rec);
        }
    };

    auto goal_dist = [&](const Pose2& p) { return (p.position() - world.goal).norm(); };

    Pose2 estimated = observe(0);
    rec.cycles.push_back(CycleRecord{
        0, world.start, true_pose, estimated,
        (world.start.position() - estimated.position()).norm(),
        std::abs(normalize_angle(world.start.theta - estimated.theta)), "-",
        CycleEvent::kNone, false});

    if (goal_dist(estimated) <= world.delta_goal) {
        rec.success = true;
        return rec;
    }

    TrajectoryPlan current;
    try {
        current = plan(world.start, world.goal, models.rotation, models.translations, map,
                       ctg, planner_cfg);
    } catch (const std::exception& e) {
        rec.failure_reason = std::string("initial plan failed: ") + e.what();
        throw PlanFailedError(rec.failure_reason, rec);
    }
    rec.plans.push_back(current);

    auto do_replan = [&](int at_cycle) {
        rec.cycles.back().event = CycleEvent::kReplan;
        TrajectoryPlan next;
        try {
            next = replan(estimated, world.goal, models.rotation, models.translations, map,
                          ctg, planner_cfg);
        } catch (const std::exception& e) {
            ++rec.replan_count;
            rec.replan_cycles.push_back(at_cycle);
            rec.total_cycles = at_cycle;
            rec.failure_reason = std::string("replan failed: ") + e.what();
            throw PlanFailedError(rec.failure_reason, rec);
        }
        current = std::move(next);
        rec.plans.push_back(current);
        ++rec.replan_count;
        rec.replan_cycles.push_back(at_cycle);
    };

    std::size_t ptr = 0;
    int interval_count = 0;
    int cycle = 0;

    while (true) {
        if (ptr >= current.waypoints.size()) {
            // plan completed short of the goal; only interval-bearing
            // policies may still replan here (threshold had its chance at
            // the final gait-sequence boundary)
            if (!config.policy.uses_interval()) {
                rec.total_cycles = cycle;
                rec.failure_reason = "plan exhausted outside goal radius (mode " +
                                     to_string(config.policy.mode) + ")";
                throw PlanFailedError(rec.failure_reason, rec);
            }
            do_replan(cycle);
            ptr = 0;
            interval_count = 0;
            continue;
        }
        if (cycle >= config.cycle_budget) {
            rec.total_cycles = cycle;
            rec.failure_reason = "cycle budget exceeded";
            throw CycleBudgetExceededError(rec.failure_reason, rec);
        }

        const Waypoint& wp = current.waypoints[ptr];
        const GaitModel& gait = models.by_id.at(wp.gait_id);
        true_pose = execute_cycle(true_pose, gait, noise);
        ++cycle;
        ++interval_count;
        elapsed_s += gait.period_s;
        estimated = observe(cycle);

        rec.cycles.push_back(CycleRecord{
            cycle, wp.pose, true_pose, estimated,
            (wp.pose.position() - estimated.position()).norm(),
            std::abs(normalize_angle(wp.pose.theta - estimated.theta)), wp.gait_id,
            CycleEvent::kNone, wp.phase_end});
        ++ptr;

        if (goal_dist(estimated) <= world.delta_goal) {
            rec.success = true;
            break;
        }

        bool trigger = false;
        if (config.policy.uses_threshold() && wp.phase_end &&
            rec.cycles.back().pos_err > config.policy.error_threshold) {
            trigger = true;
        }
        if (config.policy.uses_interval() && interval_count >= config.policy.interval) {
            trigger = true;
        }
        if (trigger) {
            do_replan(cycle);
            ptr = 0;
            interval_count = 0;
        } else if (wp.phase_end) {
            rec.cycles.back().event = CycleEvent::kGaitSwitch;
        }
    }
    rec.total_cycles = cycle;
    return rec;
}

BatchStats batch_run(const World& world, const std::vector<Gait>& library,
                     const SimConfig& base_config, const std::vector<std::uint64_t>& seeds)
{
    if (seeds.empty()) {
        throw std::invalid_argument("batch_run needs at least one seed");
    }
    BatchStats stats;
    stats.runs.reserve(seeds.size());
    double replans = 0.0;
    double cycles = 0.0;
    for (std::uint64_t seed : seeds) {
        SimConfig cfg = base_config;
        cfg.seed = seed;
        cfg.emit_markers = nullptr;
        RunSummary summary;
        summary.seed = seed;
        try {
            const RunRecord rec = run(world, library, cfg);
            summary.success = rec.success;
            summary.replans = rec.replan_count;
            summary.cycles = rec.total_cycles;
        } catch (const RunError& e) {
            summary.success = false;
            summary.replans = e.record.replan_count;
            summary.cycles = e.record.total_cycles;
            summary.failure_reason = e.what();
        }
        stats.n_success += summary.success ? 1 : 0;
        replans += summary.replans;
        cycles += summary.cycles;
        stats.runs.push_back(std::move(summary));
    }
    const double n = static_cast<double>(seeds.size());
    stats.success_rate = static_cast<double>(stats.n_success) / n;
    stats.mean_replans = replans / n;
    stats.mean_cycles = cycles / n;
    return stats;
}

}  // namespace gaitnav

#pragma once

#include "gaitnav/costmap.hpp"
#include "gaitnav/gait_synth.hpp"
#include "gaitnav/lattice_planner.hpp"
#include "gaitnav/pose_track.hpp"
#include "gaitnav/se2.hpp"
#include "gaitnav/world.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaitnav {

// Per-cycle Gaussian displacement perturbation drawn from a gait's
// covariance. `scale` multiplies the standard deviation (0 disables
// sampling entirely); the heavy-tail option inflates a fixed 5% of
// samples by `heavy_tail_scale`, and degenerates to the plain Gaussian
// at 1.
class NoiseModel {
public:
    explicit NoiseModel(std::uint64_t seed, double scale = 1.0, double heavy_tail_scale = 1.0);

    Eigen::Vector3d sample(const Eigen::Matrix3d& covariance);
    double scale() const { return scale_; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
    double scale_;
    double heavy_tail_scale_;
};

// True pose after one cycle of `gait`: mean twist plus a sampled
// body-frame perturbation.
Pose2 execute_cycle(const Pose2& state, const GaitModel& gait, NoiseModel& noise);

enum class ReplanMode { kDisabled, kOnErrorThreshold, kFixedInterval, kBoth };

std::string to_string(ReplanMode mode);
ReplanMode replan_mode_from_string(const std::string& s);

struct ReplanPolicy {
    ReplanMode mode = ReplanMode::kOnErrorThreshold;
    double error_threshold = 3.0;  // grid units
    int interval = 20;             // gait cycles

    void validate() const;
    bool uses_threshold() const {
        return mode == ReplanMode::kOnErrorThreshold || mode == ReplanMode::kBoth;
    }
    bool uses_interval() const {
        return mode == ReplanMode::kFixedInterval || mode == ReplanMode::kBoth;
    }
};

enum class CycleEvent { kNone, kGaitSwitch, kReplan };

std::string to_string(CycleEvent e);

struct CycleRecord {
    int cycle = 0;
    Pose2 planned;
    Pose2 true_pose;
    Pose2 estimated;
    double pos_err = 0.0;  // planned vs estimated positions
    double ori_err = 0.0;
    std::string gait_id;
    CycleEvent event = CycleEvent::kNone;
    bool phase_end = false;  // gait-sequence boundary after this cycle
};

struct RunRecord {
    std::vector<CycleRecord> cycles;
    bool success = false;
    std::string failure_reason;
    int replan_count = 0;
    int total_cycles = 0;
    std::vector<TrajectoryPlan> plans;  // initial plan plus one per replan
    std::vector<int> replan_cycles;
};

// run() errors carry the partial record so failed runs can still be
// written out and counted.
struct RunError : std::runtime_error {
    RunRecord record;
    RunError(const std::string& msg, RunRecord rec)
        : std::runtime_error(msg), record(std::move(rec)) {}
};

struct PlanFailedError : RunError {
    using RunError::RunError;
};

struct CycleBudgetExceededError : RunError {
    using RunError::RunError;
};

struct TrackingLostRunError : RunError {
    using RunError::RunError;
};

enum class FeedbackMode { kMarkers, kPerfect };

struct SimConfig {
    PlannerConfig planner;
    ReplanPolicy policy;
    FeedbackMode feedback = FeedbackMode::kMarkers;
    MarkerTemplate marker_template = MarkerTemplate::default_layout();
    double observation_noise = 0.0;  // std dev on observed marker points
    int cycle_budget = 1000;
    std::uint64_t seed = 0;
    double noise_scale = 1.0;
    double heavy_tail_scale = 1.0;
    // When set, receives the per-cycle marker observations that fed the
    // tracker (marker feedback mode only).
    std::vector<MarkerObservation>* emit_markers = nullptr;
};

// Closed loop: execute the plan cycle-by-cycle on the stochastic model,
// estimate pose each cycle, and replan per policy at gait-sequence
// boundaries (threshold) and/or every `interval` cycles. A plan that
// runs out short of the goal forces a replan under interval-bearing
// policies and fails the run otherwise.
RunRecord run(const World& world, const std::vector<Gait>& library, const SimConfig& config);

struct RunSummary {
    std::uint64_t seed = 0;
    bool success = false;
    int replans = 0;
    int cycles = 0;
    std::string failure_reason;
};

struct BatchStats {
    std::vector<RunSummary> runs;
    int n_success = 0;
    double success_rate = 0.0;
    double mean_replans = 0.0;
    double mean_cycles = 0.0;
};

// Independent seeded runs; per-run failures are recorded, not raised.
BatchStats batch_run(const World& world, const std::vector<Gait>& library,
                     const SimConfig& base_config, const std::vector<std::uint64_t>& seeds);

}  // namespace gaitnav

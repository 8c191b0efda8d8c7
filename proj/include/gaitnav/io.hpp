#pragma once

#include "gaitnav/closed_loop.hpp"
#include "gaitnav/gait_graph.hpp"
#include "gaitnav/gait_synth.hpp"
#include "gaitnav/lattice_planner.hpp"
#include "gaitnav/pose_track.hpp"
#include "gaitnav/world.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gaitnav {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// World file: key/value header, then `grid` and height ASCII rows
// (top row first; '#' obstacle, '.' free).
World load_world(const std::string& path);
World parse_world(std::istream& in, const std::string& origin);
void save_world(const World& world, const std::string& path);

// Portable bitmap (P1 ascii or P4 binary) obstacle layer; set pixels are
// obstacles, top image row maps to the top grid row.
BinaryGrid load_obstacles_pbm(const std::string& path);

// Trial log CSV: trial,step,from_state,to_state,dx,dy,dtheta
TrialLog load_trial_log(const std::string& path, int limb_count);
void save_trial_log(const TrialLog& log, int limb_count, const std::string& path);

// Gait library: one key/value document per gait, blank-line separated.
std::vector<Gait> load_gait_library(const std::string& path);
void save_gait_library(const std::vector<Gait>& library, int limb_count,
                       const std::string& path);

// Marker replay CSV: frame,t,x,y (one row per detected marker).
std::vector<MarkerObservation> load_marker_replay(const std::string& path);
void save_marker_replay(const std::vector<MarkerObservation>& replay,
                        const std::string& path);

// Pose stream CSV: frame,t,x,y,theta,n_visible
struct PoseSample {
    int frame = 0;
    double t = 0.0;
    Pose2 pose;
    int n_visible = 0;
};
void save_pose_stream(const std::vector<PoseSample>& stream, const std::string& path);

// Marker template file: one "x y" line per marker.
MarkerTemplate load_marker_template(const std::string& path);

// Plan outputs: step listing (structured text) and per-cycle waypoint CSV
// cycle,x,y,theta,gait_id (row 0 is the start pose).
void save_plan_steps(const TrajectoryPlan& plan, const std::vector<std::string>& gait_ids,
                     const std::string& path);
void save_plan_waypoints(const TrajectoryPlan& plan, const std::string& path);

// Run record CSV: cycle,planned_x,planned_y,planned_th,true_x,true_y,
// true_th,est_x,est_y,est_th,pos_err,ori_err,gait,event,phase_end
void save_run_record(const RunRecord& record, const std::string& path);
std::vector<CycleRecord> load_run_record(const std::string& path);

}  // namespace gaitnav

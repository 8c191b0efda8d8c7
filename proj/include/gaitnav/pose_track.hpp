#pragma once

#include "gaitnav/se2.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace gaitnav {

struct DegenerateConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrackingLostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BootstrapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Body-frame marker layout. The default layout is rotation-asymmetric on
// purpose: first-frame labeling registers every assignment and keeps the
// unambiguous best.
struct MarkerTemplate {
    std::vector<Eigen::Vector2d> points;

    static MarkerTemplate default_layout();  // 4 markers, asymmetric cross
    int size() const { return static_cast<int>(points.size()); }
    double min_pairwise_distance() const;
    void validate() const;  // >= 2 markers, no two coincident
};

// Unlabeled detections of one frame.
struct MarkerObservation {
    int frame = 0;
    double t = 0.0;
    std::vector<Eigen::Vector2d> points;
};

struct Correspondence {
    int template_index = 0;
    Eigen::Vector2d world = Eigen::Vector2d::Zero();
};

struct TrackState {
    Pose2 last_pose;
    std::vector<Eigen::Vector2d> last_markers;  // labeled world positions
    int frames_since_full_view = 0;
};

struct TrackerConfig {
    // <= 0 selects half the minimum inter-marker template distance
    double gating_radius = -1.0;
    int min_matches = 2;
};

// Least-squares rigid transform taking template points onto world points
// (paired by index), det(R) = +1 enforced by the SVD reflection fix.
Pose2 register_pose(const std::vector<Eigen::Vector2d>& template_points,
                    const std::vector<Eigen::Vector2d>& world_points);

// Label observed points by greedy nearest-neighbor against the markers
// predicted from the track's last pose; one-to-one within the gating
// radius. Throws TrackingLostError when fewer than min_matches survive.
std::vector<Correspondence> associate(const TrackState& track,
                                      const MarkerTemplate& tmpl,
                                      const MarkerObservation& obs,
                                      const TrackerConfig& config);

// Full labeled marker set: matched markers keep their observed positions,
// occluded ones are placed at pose * template.
std::vector<Eigen::Vector2d> reconstruct(const MarkerTemplate& tmpl, const Pose2& pose,
                                         const std::vector<Correspondence>& matched);

// Sequential per-frame tracker: bootstrap on a full view, then
// associate -> register -> reconstruct.
class MarkerTracker {
public:
    explicit MarkerTracker(MarkerTemplate tmpl, TrackerConfig config = {});

    struct Update {
        Pose2 pose;
        std::vector<Eigen::Vector2d> markers;  // full labeled set
        int n_visible = 0;
        std::vector<bool> occluded;
    };

    Update update(const MarkerObservation& obs);

    bool initialized() const { return initialized_; }
    const TrackState& state() const { return state_; }
    double gating_radius() const { return gate_; }

private:
    Update bootstrap(const MarkerObservation& obs);

    MarkerTemplate template_;
    TrackerConfig config_;
    double gate_;
    TrackState state_;
    bool initialized_ = false;
};

// World positions of the template under a pose.
std::vector<Eigen::Vector2d> project_markers(const MarkerTemplate& tmpl, const Pose2& pose);

}  // namespace gaitnav

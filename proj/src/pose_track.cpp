#include "gaitnav/pose_track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gaitnav {

MarkerTemplate MarkerTemplate::default_layout()
{
    // hub-scale, deliberately asymmetric; min pairwise distance 8.65 keeps
    // the nearest-neighbor gate well above one gait cycle of motion
    return MarkerTemplate{{{9.0, 0.0}, {0.0, 6.0}, {-7.2, 0.0}, {0.0, -4.8}}};
}

double MarkerTemplate::min_pairwise_distance() const
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::min(best, (points[i] - points[j]).norm());
        }
    }
    return best;
}

void MarkerTemplate::validate() const
{
    if (points.size() < 2) {
        throw std::invalid_argument("marker template needs at least 2 markers");
    }
    if (min_pairwise_distance() <= 1e-12) {
        throw std::invalid_argument("marker template has coincident markers");
    }
}

std::vector<Eigen::Vector2d> project_markers(const MarkerTemplate& tmpl, const Pose2& pose)
{
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    std::vector<Eigen::Vector2d> out;
    out.reserve(tmpl.points.size());
    for (const auto& p : tmpl.points) {
        out.emplace_back(pose.x + c * p.x() - s * p.y(), pose.y + s * p.x() + c * p.y());
    }
    return out;
}

Pose2 register_pose(const std::vector<Eigen::Vector2d>& template_points,
                    const std::vector<Eigen::Vector2d>& world_points)
{
    if (template_points.size() != world_points.size() || template_points.size() < 2) {
        throw std::invalid_argument("register_pose needs >= 2 paired correspondences");
    }
    const auto n = static_cast<double>(template_points.size());
    Eigen::Vector2d ca = Eigen::Vector2d::Zero();
    Eigen::Vector2d cb = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < template_points.size(); ++i) {
        ca += template_points[i];
        cb += world_points[i];
    }
    ca /= n;
    cb /= n;

    double spread = 0.0;
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < template_points.size(); ++i) {
        const Eigen::Vector2d a = template_points[i] - ca;
        const Eigen::Vector2d b = world_points[i] - cb;
        spread = std::max(spread, a.norm());
        h += a * b.transpose();
    }
    if (spread <= 1e-12) {
        throw DegenerateConfigurationError("correspondence points are coincident");
    }

    Eigen::JacobiSVD<Eigen::Matrix2d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix2d u = svd.matrixU();
    Eigen::Matrix2d v = svd.matrixV();
    Eigen::Matrix2d r = v * u.transpose();
    if (r.determinant() < 0.0) {
        v.col(1) *= -1.0;
        r = v * u.transpose();
    }
    const Eigen::Vector2d t = cb - r * ca;
    return Pose2{t.x(), t.y(), std::atan2(r(1, 0), r(0, 0))};
}

std::vector<Correspondence> associate(const TrackState& track, const MarkerTemplate& tmpl,
                                      const MarkerObservation& obs,
                                      const TrackerConfig& config)
{
    const auto predicted = project_markers(tmpl, track.last_pose);
    const double gate = config.gating_radius > 0.0
                            ? config.gating_radius
                            : 0.5 * tmpl.min_pairwise_distance();

    struct Pair {
        double dist;
        int ti;
        int oi;
    };
    std::vector<Pair> pairs;
    for (int ti = 0; ti < tmpl.size(); ++ti) {
        for (int oi = 0; oi < static_cast<int>(obs.points.size()); ++oi) {
            const double d = (predicted[static_cast<std::size_t>(ti)] -
                              obs.points[static_cast<std::size_t>(oi)])
                                 .norm();
            if (d <= gate) {
                pairs.push_back({d, ti, oi});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) {
            return a.dist < b.dist;
        }
        if (a.ti != b.ti) {
            return a.ti < b.ti;
        }
        return a.oi < b.oi;
    });

    std::vector<bool> t_used(static_cast<std::size_t>(tmpl.size()), false);
    std::vector<bool> o_used(obs.points.size(), false);
    std::vector<Correspondence> matched;
    for (const auto& p : pairs) {
        if (t_used[static_cast<std::size_t>(p.ti)] || o_used[static_cast<std::size_t>(p.oi)]) {
            continue;
        }
        t_used[static_cast<std::size_t>(p.ti)] = true;
        o_used[static_cast<std::size_t>(p.oi)] = true;
        matched.push_back({p.ti, obs.points[static_cast<std::size_t>(p.oi)]});
    }
    if (static_cast<int>(matched.size()) < config.min_matches) {
        throw TrackingLostError("only " + std::to_string(matched.size()) +
                                " marker(s) matched within the gating radius");
    }
    std::sort(matched.begin(), matched.end(), [](const Correspondence& a, const Correspondence& b) {
        return a.template_index < b.template_index;
    });
    return matched;
}

std::vector<Eigen::Vector2d> reconstruct(const MarkerTemplate& tmpl, const Pose2& pose,
                                         const std::vector<Correspondence>& matched)
{
    auto markers = project_markers(tmpl, pose);
    for (const auto& c : matched) {
        markers[static_cast<std::size_t>(c.template_index)] = c.world;
    }
    return markers;
}

MarkerTracker::MarkerTracker(MarkerTemplate tmpl, TrackerConfig config)
    : template_(std::move(tmpl)), config_(config)
{
    template_.validate();
    gate_ = config_.gating_radius > 0.0 ? config_.gating_radius
                                        : 0.5 * template_.min_pairwise_distance();
}

MarkerTracker::Update MarkerTracker::bootstrap(const MarkerObservation& obs)
{
    const int k = template_.size();
    if (static_cast<int>(obs.points.size()) != k) {
        throw BootstrapError("first frame must observe all " + std::to_string(k) +
                             " markers, got " + std::to_string(obs.points.size()));
    }

    // try every assignment, keep the least-squares best
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best_residual = std::numeric_limits<double>::infinity();
    Pose2 best_pose;
    std::vector<int> best_perm;
    do {
        std::vector<Eigen::Vector2d> world(static_cast<std::size_t>(k));
        for (int ti = 0; ti < k; ++ti) {
            world[static_cast<std::size_t>(ti)] =
                obs.points[static_cast<std::size_t>(perm[static_cast<std::size_t>(ti)])];
        }
        const Pose2 pose = register_pose(template_.points, world);
        const auto projected = project_markers(template_, pose);
        double residual = 0.0;
        for (int ti = 0; ti < k; ++ti) {
            residual += (projected[static_cast<std::size_t>(ti)] -
                         world[static_cast<std::size_t>(ti)])
                            .squaredNorm();
        }
        if (residual < best_residual) {
            best_residual = residual;
            best_pose = pose;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    state_.last_pose = best_pose;
    state_.last_markers.resize(static_cast<std::size_t>(k));
    for (int ti = 0; ti < k; ++ti) {
        state_.last_markers[static_cast<std::size_t>(ti)] =
            obs.points[static_cast<std::size_t>(best_perm[static_cast<std::size_t>(ti)])];
    }
    state_.frames_since_full_view = 0;
    initialized_ = true;
    return Update{best_pose, state_.last_markers, k,
                  std::vector<bool>(static_cast<std::size_t>(k), false)};
}

MarkerTracker::Update MarkerTracker::update(const MarkerObservation& obs)
{
    if (!initialized_) {
        return bootstrap(obs);
    }
    const auto matched = associate(state_, template_, obs, config_);

    std::vector<Eigen::Vector2d> tmpl_pts;
    std::vector<Eigen::Vector2d> world_pts;
    tmpl_pts.reserve(matched.size());
    world_pts.reserve(matched.size());
    for (const auto& c : matched) {
        tmpl_pts.push_back(template_.points[static_cast<std::size_t>(c.template_index)]);
        world_pts.push_back(c.world);
    }
    const Pose2 pose = register_pose(tmpl_pts, world_pts);
    const auto markers = reconstruct(template_, pose, matched);

    std::vector<bool> occluded(static_cast<std::size_t>(template_.size()), true);
    for (const auto& c : matched) {
        occluded[static_cast<std::size_t>(c.template_index)] = false;
    }
    const int n_visible = static_cast<int>(matched.size());
    if (n_visible == template_.size()) {
        state_.frames_since_full_view = 0;
    } else {
        ++state_.frames_since_full_view;
    }
    state_.last_pose = pose;
    state_.last_markers = markers;
    return Update{pose, markers, n_visible, occluded};
}

}  // namespace gaitnav

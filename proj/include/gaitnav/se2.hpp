#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gaitnav {

// Wrap an angle into (-pi, pi].
double normalize_angle(double a);

// Planar rigid pose in grid units / radians. theta is kept in (-pi, pi]
// by every operation that produces a Pose2.
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    static Pose2 identity() { return {}; }
    Eigen::Vector2d position() const { return {x, y}; }

    bool operator==(const Pose2& o) const {
        return x == o.x && y == o.y && theta == o.theta;
    }
};

// Displacement produced by one full gait cycle, expressed in the body
// frame at the start of the cycle.
struct CycleTwist {
    double px = 0.0;
    double py = 0.0;
    double omega = 0.0;
};

enum class GaitKind { kRotation, kTranslation };

std::string to_string(GaitKind kind);
GaitKind gait_kind_from_string(const std::string& s);

// Per-cycle motion model of one gait: mean twist, spread, and wall-clock
// period. Covariance row/col order is (px, py, theta).
struct GaitModel {
    std::string id;
    GaitKind kind = GaitKind::kTranslation;
    CycleTwist twist;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    double period_s = 0.45;

    // Throws std::invalid_argument on asymmetric/indefinite covariance
    // (eigenvalue < -1e-12) or non-positive period.
    void validate() const;
};

struct ZeroRotationError : std::domain_error {
    ZeroRotationError() : std::domain_error("rotation gait has zero omega; cannot aim") {}
};

// SE(2) group product a * b; theta normalized.
Pose2 compose(const Pose2& a, const Pose2& b);

Pose2 inverse(const Pose2& g);

// start composed n times with the per-cycle increment. advance(g, t, 0) = g.
Pose2 advance(const Pose2& start, const CycleTwist& t, int n);

// Largest integer N >= 0 with N*|omega| < pi/2. Throws ZeroRotationError
// when omega == 0.
int max_rotation_periods(double omega);

}  // namespace gaitnav

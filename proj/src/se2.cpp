#include "gaitnav/se2.hpp"

#include <cmath>
#include <numbers>

namespace gaitnav {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
}  // namespace

double normalize_angle(double a)
{
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) {
        a += 2.0 * kPi;
    } else if (a > kPi) {
        a -= 2.0 * kPi;
    }
    return a;
}

std::string to_string(GaitKind kind)
{
    return kind == GaitKind::kRotation ? "rotation" : "translation";
}

GaitKind gait_kind_from_string(const std::string& s)
{
    if (s == "rotation") {
        return GaitKind::kRotation;
    }
    if (s == "translation") {
        return GaitKind::kTranslation;
    }
    throw std::invalid_argument("unknown gait kind: " + s);
}

void GaitModel::validate() const
{
    if (!(period_s > 0.0)) {
        throw std::invalid_argument("gait '" + id + "': period must be > 0");
    }
    if (!covariance.allFinite()) {
        throw std::invalid_argument("gait '" + id + "': covariance has non-finite entries");
    }
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("gait '" + id + "': covariance not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(covariance);
    if (es.eigenvalues().minCoeff() < -1e-12) {
        throw std::invalid_argument("gait '" + id + "': covariance not positive semi-definite");
    }
}

Pose2 compose(const Pose2& a, const Pose2& b)
{
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    return {a.x + c * b.x - s * b.y,
            a.y + s * b.x + c * b.y,
            normalize_angle(a.theta + b.theta)};
}

Pose2 inverse(const Pose2& g)
{
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    return {-(c * g.x + s * g.y),
            -(-s * g.x + c * g.y),
            normalize_angle(-g.theta)};
}

Pose2 advance(const Pose2& start, const CycleTwist& t, int n)
{
    if (n < 0) {
        throw std::invalid_argument("advance: cycle count must be >= 0");
    }
    const Pose2 step{t.px, t.py, t.omega};
    Pose2 g = start;
    for (int i = 0; i < n; ++i) {
        g = compose(g, step);
    }
    return g;
}

int max_rotation_periods(double omega)
{
    if (omega == 0.0) {
        throw ZeroRotationError();
    }
    const double w = std::abs(omega);
    int n = static_cast<int>(std::floor(kHalfPi / w));
    while (n > 0 && static_cast<double>(n) * w >= kHalfPi) {
        --n;
    }
    while (static_cast<double>(n + 1) * w < kHalfPi) {
        ++n;
    }
    return n;
}

}  // namespace gaitnav

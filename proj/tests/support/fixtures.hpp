#pragma once

#include "gaitnav/costmap.hpp"
#include "gaitnav/gait_synth.hpp"
#include "gaitnav/se2.hpp"
#include "gaitnav/world.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fixtures {

inline gaitnav::World empty_world(int w, int h, gaitnav::Pose2 start,
                                  Eigen::Vector2d goal, double delta_goal)
{
    gaitnav::World world;
    world.obstacles.width = w;
    world.obstacles.height = h;
    world.obstacles.cells.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
    world.resolution = 1.0;
    world.params.c_max = 100.0;
    world.params.lambda = 0.5;
    world.params.occ_threshold = 60.0;
    world.start = start;
    world.goal = goal;
    world.delta_goal = delta_goal;
    return world;
}

inline void add_rect_obstacle(gaitnav::World& world, int x0, int y0, int x1, int y1)
{
    for (int iy = y0; iy <= y1; ++iy) {
        for (int ix = x0; ix <= x1; ++ix) {
            world.obstacles.set(ix, iy, 1);
        }
    }
}

// Five-gait library (R, T1..T4 by limb permutation) with per-cycle
// translation ~ `translation_per_cycle` grid units and shared position /
// heading noise levels.
inline std::vector<gaitnav::Gait> make_library(double translation_per_cycle,
                                               double sigma_pos, double sigma_theta)
{
    using namespace gaitnav;
    const Eigen::Matrix3d cov =
        Eigen::Vector3d(sigma_pos * sigma_pos, sigma_pos * sigma_pos,
                        sigma_theta * sigma_theta)
            .asDiagonal();

    Gait rotation;
    rotation.id = "R";
    rotation.kind = GaitKind::kRotation;
    rotation.state_cycle = {state_from_string("0000"), state_from_string("0001"),
                            state_from_string("0011"), state_from_string("0010")};
    rotation.predicted.id = "R";
    rotation.predicted.kind = GaitKind::kRotation;
    rotation.predicted.twist = {0.02 * translation_per_cycle,
                                -0.01 * translation_per_cycle, 0.15};
    rotation.predicted.covariance = cov;
    rotation.predicted.period_s = 4 * 0.45;

    Gait t1;
    t1.id = "T1";
    t1.kind = GaitKind::kTranslation;
    t1.state_cycle = {state_from_string("0000"), state_from_string("1000"),
                      state_from_string("1100"), state_from_string("0100")};
    t1.predicted.id = "T1";
    t1.predicted.kind = GaitKind::kTranslation;
    t1.predicted.twist = {translation_per_cycle, 0.03 * translation_per_cycle, 0.01};
    t1.predicted.covariance = cov;
    t1.predicted.period_s = 4 * 0.45;

    std::vector<Gait> library{rotation, t1};
    for (int q = 1; q <= 3; ++q) {
        Gait t = permute_gait(t1, q);
        t.id = "T" + std::to_string(q + 1);
        t.predicted.id = t.id;
        library.push_back(std::move(t));
    }
    return library;
}

inline std::vector<gaitnav::GaitModel> translation_models(
    const std::vector<gaitnav::Gait>& library)
{
    std::vector<gaitnav::GaitModel> out;
    for (const auto& g : library) {
        if (g.kind == gaitnav::GaitKind::kTranslation) {
            gaitnav::GaitModel m = g.model();
            m.id = g.id;
            out.push_back(m);
        }
    }
    return out;
}

inline gaitnav::GaitModel rotation_model(const std::vector<gaitnav::Gait>& library)
{
    for (const auto& g : library) {
        if (g.kind == gaitnav::GaitKind::kRotation) {
            gaitnav::GaitModel m = g.model();
            m.id = g.id;
            return m;
        }
    }
    throw std::runtime_error("no rotation gait in fixture library");
}

}  // namespace fixtures

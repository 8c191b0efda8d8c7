#include "gaitnav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace gaitnav {

namespace {

constexpr double kScale = 4.0;  // px per grid unit

class Canvas {
public:
    Canvas(double world_w, double world_h)
        : world_h_(world_h), px_w_(world_w * kScale), px_h_(world_h * kScale)
    {
        body_ << std::setprecision(8);
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_w_
              << "\" height=\"" << px_h_ << "\" viewBox=\"0 0 " << px_w_ << ' ' << px_h_
              << "\">\n";
    }

    double sx(double x) const { return x * kScale; }
    double sy(double y) const { return (world_h_ - y) * kScale; }

    void rect(double x, double y, double w, double h, const std::string& fill)
    {
        body_ << "<rect x=\"" << sx(x) << "\" y=\"" << sy(y + h) << "\" width=\"" << w * kScale
              << "\" height=\"" << h * kScale << "\" fill=\"" << fill << "\"/>\n";
    }

    void circle(double x, double y, double r_px, const std::string& fill,
                const std::string& extra = "")
    {
        body_ << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"" << r_px
              << "\" fill=\"" << fill << "\"" << (extra.empty() ? "" : " " + extra) << "/>\n";
    }

    void goal_ring(double x, double y, double radius_units, const std::string& stroke)
    {
        body_ << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\""
              << radius_units * kScale << "\" fill=\"none\" stroke=\"" << stroke
              << "\" stroke-width=\"1.5\"/>\n";
    }

    void cross(double x, double y, double half_px, const std::string& stroke)
    {
        const double cx = sx(x);
        const double cy = sy(y);
        body_ << "<path d=\"M" << cx - half_px << ' ' << cy - half_px << " L" << cx + half_px
              << ' ' << cy + half_px << " M" << cx - half_px << ' ' << cy + half_px << " L"
              << cx + half_px << ' ' << cy - half_px << "\" stroke=\"" << stroke
              << "\" stroke-width=\"2\" fill=\"none\"/>\n";
    }

    template <typename GetXY>
    void polyline(std::size_t n, GetXY get, const std::string& stroke, double width,
                  const std::string& extra = "")
    {
        if (n < 2) {
            return;
        }
        body_ << "<polyline points=\"";
        for (std::size_t i = 0; i < n; ++i) {
            const auto [x, y] = get(i);
            body_ << sx(x) << ',' << sy(y) << ' ';
        }
        body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
              << "\"" << (extra.empty() ? "" : " " + extra) << "/>\n";
    }

    std::string finish()
    {
        body_ << "</svg>\n";
        return body_.str();
    }

private:
    double world_h_;
    double px_w_;
    double px_h_;
    std::ostringstream body_;
};

std::string heat_color(double frac)
{
    // dark blue -> yellow
    const double f = std::clamp(frac, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(30.0 + (250.0 - 30.0) * f));
    const int g = static_cast<int>(std::lround(40.0 + (220.0 - 40.0) * f));
    const int b = static_cast<int>(std::lround(90.0 + (40.0 - 90.0) * f));
    std::ostringstream out;
    out << "rgb(" << r << ',' << g << ',' << b << ')';
    return out.str();
}

const char* kGaitColors[] = {"#00c8c8", "#d4b200", "#7ed957", "#ff8c1a",
                             "#b05cff", "#ff5c8a"};

void draw_world_base(Canvas& canvas, const World& world, const CostMap& map,
                     bool heat_shading)
{
    const double res = world.resolution;
    const double w_units = world.obstacles.width * res;
    const double h_units = world.obstacles.height * res;
    if (heat_shading) {
        canvas.rect(0, 0, w_units, h_units, heat_color(0.0));
        for (int iy = 0; iy < map.height(); ++iy) {
            for (int ix = 0; ix < map.width(); ++ix) {
                const double c = map.cost({ix, iy});
                if (c > 0.02 * map.params().c_max) {
                    canvas.rect(ix * res, iy * res, res, res, heat_color(c / map.params().c_max));
                }
            }
        }
    } else {
        canvas.rect(0, 0, w_units, h_units, "#ffffff");
        for (int iy = 0; iy < map.height(); ++iy) {
            for (int ix = 0; ix < map.width(); ++ix) {
                if (map.occupied({ix, iy})) {
                    canvas.rect(ix * res, iy * res, res, res, "#f2c9c9");
                }
            }
        }
        for (int iy = 0; iy < world.obstacles.height; ++iy) {
            for (int ix = 0; ix < world.obstacles.width; ++ix) {
                if (world.obstacles.at(ix, iy)) {
                    canvas.rect(ix * res, iy * res, res, res, "#d03030");
                }
            }
        }
    }
    canvas.cross(world.goal.x(), world.goal.y(), 7.0, "#0a9c30");
    canvas.goal_ring(world.goal.x(), world.goal.y(), world.delta_goal, "#0a9c30");
}

void draw_plan_polyline(Canvas& canvas, const TrajectoryPlan& plan,
                        const std::string& stroke, double width, const std::string& extra)
{
    std::vector<Pose2> pts;
    pts.reserve(plan.waypoints.size() + 1);
    pts.push_back(plan.start);
    for (const auto& wp : plan.waypoints) {
        pts.push_back(wp.pose);
    }
    canvas.polyline(pts.size(),
                    [&](std::size_t i) { return std::pair{pts[i].x, pts[i].y}; }, stroke,
                    width, extra);
}

}  // namespace

std::string render_plan_svg(const World& world, const CostMap& map,
                            const TrajectoryPlan& plan, const ExplorationLog* exploration,
                            const std::vector<std::string>& gait_ids)
{
    (void)gait_ids;
    Canvas canvas(world.obstacles.width * world.resolution,
                  world.obstacles.height * world.resolution);
    draw_world_base(canvas, world, map, true);

    if (exploration) {
        const auto& cands = exploration->candidates;
        for (std::size_t k = 0; k < cands.size(); ++k) {
            const auto& c = cands[k];
            // draw only the longest chain of each (iteration, n_r, gait) group
            const bool extended = k + 1 < cands.size() &&
                                  cands[k + 1].iteration == c.iteration &&
                                  cands[k + 1].n_r == c.n_r &&
                                  cands[k + 1].gait_index == c.gait_index &&
                                  cands[k + 1].n_t == c.n_t + 1;
            if (extended || c.poses.size() < 2) {
                continue;
            }
            const auto* color = kGaitColors[static_cast<std::size_t>(c.gait_index) %
                                            (sizeof(kGaitColors) / sizeof(kGaitColors[0]))];
            canvas.polyline(c.poses.size(),
                            [&](std::size_t i) {
                                return std::pair{c.poses[i].x, c.poses[i].y};
                            },
                            color, 0.7, "opacity=\"0.45\"");
        }
    }

    draw_plan_polyline(canvas, plan, "#8c1010", 2.5, "");
    canvas.circle(plan.start.x, plan.start.y, 4.0, "#8c1010");
    return canvas.finish();
}

namespace {

std::string render_executed(const World& world, const CostMap& map,
                            const std::vector<CycleRecord>& cycles,
                            const std::vector<TrajectoryPlan>* abandoned)
{
    Canvas canvas(world.obstacles.width * world.resolution,
                  world.obstacles.height * world.resolution);
    draw_world_base(canvas, world, map, false);

    if (abandoned) {
        for (const auto& p : *abandoned) {
            draw_plan_polyline(canvas, p, "#ff9ecb", 1.2, "stroke-dasharray=\"4 4\"");
        }
    }
    canvas.polyline(cycles.size(),
                    [&](std::size_t i) {
                        return std::pair{cycles[i].planned.x, cycles[i].planned.y};
                    },
                    "#8c1010", 2.0, "");
    canvas.polyline(cycles.size(),
                    [&](std::size_t i) {
                        return std::pair{cycles[i].true_pose.x, cycles[i].true_pose.y};
                    },
                    "#1a55d4", 1.6, "");
    for (const auto& r : cycles) {
        if (r.event == CycleEvent::kGaitSwitch) {
            canvas.circle(r.true_pose.x, r.true_pose.y, 2.4, "#1a55d4");
        } else if (r.event == CycleEvent::kReplan) {
            canvas.circle(r.true_pose.x, r.true_pose.y, 3.2, "#e01010");
        }
    }
    if (!cycles.empty()) {
        canvas.circle(cycles.front().true_pose.x, cycles.front().true_pose.y, 4.0, "#1a55d4");
    }
    return canvas.finish();
}

}  // namespace

std::string render_run_svg(const World& world, const CostMap& map, const RunRecord& record)
{
    return render_executed(world, map, record.cycles, &record.plans);
}

std::string render_record_svg(const World& world, const CostMap& map,
                              const std::vector<CycleRecord>& cycles)
{
    return render_executed(world, map, cycles, nullptr);
}

}  // namespace gaitnav

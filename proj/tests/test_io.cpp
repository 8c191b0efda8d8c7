#include "gaitnav/io.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace gaitnav;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir()
    {
        path = std::filesystem::temp_directory_path() /
               ("gaitnav_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("world file round trip")
{
    TempDir tmp;
    auto world = fixtures::empty_world(12, 8, {2.5, 3.5, 0.25}, {10.0, 6.0}, 1.5);
    fixtures::add_rect_obstacle(world, 5, 2, 7, 5);
    world.params.lambda = 0.37;

    save_world(world, tmp.file("w.txt"));
    const World back = load_world(tmp.file("w.txt"));
    CHECK(back.obstacles.width == 12);
    CHECK(back.obstacles.height == 8);
    CHECK(back.obstacles.cells == world.obstacles.cells);
    CHECK(back.resolution == world.resolution);
    CHECK(back.params.lambda == world.params.lambda);
    CHECK(back.start == world.start);
    CHECK(back.goal == world.goal);
    CHECK(back.delta_goal == world.delta_goal);
}

TEST_CASE("world parser errors")
{
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_world(in, "test");
    };
    CHECK_THROWS_AS(parse("width 4\nheight 2\nstart 0 0 0\ngoal 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse("width 4\nheight 2\nstart 0 0 0\ngoal 1 1\ngrid\n....\n"),
                    ParseError);  // truncated grid
    CHECK_THROWS_AS(parse("width 4\nheight 1\nstart 0 0 0\ngoal 1 1\ngrid\n..x.\n"),
                    ParseError);  // bad cell
    CHECK_THROWS_AS(parse("width 4\nheight 1\nbogus 3\nstart 0 0 0\ngoal 1 1\ngrid\n....\n"),
                    ParseError);
    CHECK_THROWS_AS(
        parse("width 4\nheight 1\ndelta_goal 0\nstart 0 0 0\ngoal 1 1\ngrid\n....\n"),
        ParseError);
    // comments and blank lines are fine
    const World w =
        parse("# comment\nwidth 2\nheight 2\n\nstart 0.5 0.5 0\ngoal 1.5 1.5\n"
              "delta_goal 1\ngrid\n.#\n..\n");
    CHECK(w.obstacles.at(1, 1) == 1);  // top row maps to high y
    CHECK(w.obstacles.at(0, 0) == 0);
}

TEST_CASE("PBM import, ascii and binary")
{
    TempDir tmp;
    {
        std::ofstream p1(tmp.file("a.pbm"));
        p1 << "P1\n# comment\n5 3\n";
        p1 << "1 0 0 0 1\n";
        p1 << "0 1 0 1 0\n";
        p1 << "0 0 1 0 0\n";
    }
    const BinaryGrid a = load_obstacles_pbm(tmp.file("a.pbm"));
    CHECK(a.width == 5);
    CHECK(a.height == 3);
    // top image row -> iy = 2
    CHECK(a.at(0, 2) == 1);
    CHECK(a.at(4, 2) == 1);
    CHECK(a.at(1, 1) == 1);
    CHECK(a.at(2, 0) == 1);
    CHECK(a.at(2, 2) == 0);

    {
        std::ofstream p4(tmp.file("b.pbm"), std::ios::binary);
        p4 << "P4\n5 3\n";
        // rows: 10001, 01010, 00100 packed into single bytes
        const unsigned char rows[3] = {0b10001000, 0b01010000, 0b00100000};
        p4.write(reinterpret_cast<const char*>(rows), 3);
    }
    const BinaryGrid b = load_obstacles_pbm(tmp.file("b.pbm"));
    CHECK(b.width == 5);
    CHECK(b.height == 3);
    CHECK(b.cells == a.cells);

    {
        std::ofstream bad(tmp.file("c.pbm"));
        bad << "P5\n2 2\n";
    }
    CHECK_THROWS_AS(load_obstacles_pbm(tmp.file("c.pbm")), ParseError);
    CHECK_THROWS_AS(load_obstacles_pbm(tmp.file("missing.pbm")), ParseError);
}

TEST_CASE("trial log round trip")
{
    TempDir tmp;
    TrialLog log;
    log.push_back({1, 0, state_from_string("0000"), state_from_string("1000"),
                   {0.25, -0.125, 0.0625}});
    log.push_back({1, 1, state_from_string("1000"), state_from_string("1100"),
                   {0.5, 0.0, -0.03125}});
    save_trial_log(log, 4, tmp.file("log.csv"));
    const TrialLog back = load_trial_log(tmp.file("log.csv"), 4);
    REQUIRE(back.size() == 2);
    CHECK(back[0].trial == 1);
    CHECK(back[0].from == log[0].from);
    CHECK(back[0].displacement == log[0].displacement);
    CHECK(back[1].to == log[1].to);

    CHECK_THROWS_AS(load_trial_log(tmp.file("log.csv"), 3), ParseError);

    {
        std::ofstream bad(tmp.file("bad.csv"));
        bad << "trial,step\n";
    }
    CHECK_THROWS_AS(load_trial_log(tmp.file("bad.csv"), 4), ParseError);
}

TEST_CASE("gait library round trip")
{
    TempDir tmp;
    auto library = fixtures::make_library(1.0, 0.1, 0.02);
    // give one gait a measured model
    GaitModel measured = library[1].predicted;
    measured.twist = {0.93, 0.05, 0.008};
    measured.period_s = 1.9;
    library[1].measured = measured;

    save_gait_library(library, 4, tmp.file("lib.txt"));
    const auto back = load_gait_library(tmp.file("lib.txt"));
    REQUIRE(back.size() == library.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].id == library[i].id);
        CHECK(back[i].kind == library[i].kind);
        CHECK(back[i].state_cycle == library[i].state_cycle);
        CHECK(back[i].predicted.twist.px == library[i].predicted.twist.px);
        CHECK(back[i].predicted.covariance == library[i].predicted.covariance);
        CHECK(back[i].predicted.period_s == library[i].predicted.period_s);
        CHECK(back[i].measured.has_value() == library[i].measured.has_value());
    }
    REQUIRE(back[1].measured);
    CHECK(back[1].measured->twist.px == 0.93);
    CHECK(back[1].model().twist.px == 0.93);   // measured takes precedence
    CHECK(back[0].model().twist.omega == library[0].predicted.twist.omega);

    {
        std::ofstream bad(tmp.file("bad.txt"));
        bad << "id X\nkind translation\n";  // incomplete
    }
    CHECK_THROWS_AS(load_gait_library(tmp.file("bad.txt")), ParseError);
}

TEST_CASE("marker replay round trip")
{
    TempDir tmp;
    std::vector<MarkerObservation> replay(2);
    replay[0].frame = 0;
    replay[0].t = 0.0;
    replay[0].points = {{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}, {7.0, 8.0}};
    replay[1].frame = 1;
    replay[1].t = 1.8;
    replay[1].points = {{1.5, 2.5}, {3.5, 4.5}, {5.5, 6.5}};

    save_marker_replay(replay, tmp.file("replay.csv"));
    const auto back = load_marker_replay(tmp.file("replay.csv"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].points.size() == 4);
    CHECK(back[1].points.size() == 3);
    CHECK(back[1].t == 1.8);
    CHECK(back[0].points[2] == Eigen::Vector2d(5.0, 6.0));
}

TEST_CASE("run record round trip")
{
    TempDir tmp;
    RunRecord rec;
    CycleRecord row;
    row.cycle = 3;
    row.planned = {1.0, 2.0, 0.1};
    row.true_pose = {1.1, 2.1, 0.12};
    row.estimated = {1.05, 2.05, 0.11};
    row.pos_err = 0.07;
    row.ori_err = 0.01;
    row.gait_id = "T2";
    row.event = CycleEvent::kReplan;
    row.phase_end = true;
    rec.cycles.push_back(row);

    save_run_record(rec, tmp.file("rec.csv"));
    const auto back = load_run_record(tmp.file("rec.csv"));
    REQUIRE(back.size() == 1);
    CHECK(back[0].cycle == 3);
    CHECK(back[0].planned == row.planned);
    CHECK(back[0].estimated == row.estimated);
    CHECK(back[0].event == CycleEvent::kReplan);
    CHECK(back[0].phase_end);
    CHECK(back[0].gait_id == "T2");
}

TEST_CASE("template file")
{
    TempDir tmp;
    {
        std::ofstream f(tmp.file("tmpl.txt"));
        f << "# markers\n6 0\n0 4\n-4.8 0\n0 -3.2\n";
    }
    const auto tmpl = load_marker_template(tmp.file("tmpl.txt"));
    REQUIRE(tmpl.size() == 4);
    CHECK(tmpl.points[2] == Eigen::Vector2d(-4.8, 0.0));

    {
        std::ofstream f(tmp.file("one.txt"));
        f << "1 1\n";
    }
    CHECK_THROWS_AS(load_marker_template(tmp.file("one.txt")), std::invalid_argument);
}

TEST_CASE("plan outputs")
{
    TempDir tmp;
    TrajectoryPlan plan;
    plan.start = {1.0, 1.0, 0.0};
    plan.steps.push_back({2, 0, 3, {5.0, 1.2, 0.3}});
    for (int c = 1; c <= 5; ++c) {
        plan.waypoints.push_back(
            {c, {1.0 + c, 1.0, 0.0}, c <= 2 ? "R" : "T1", c == 2 || c == 5});
    }
    save_plan_steps(plan, {"T1"}, tmp.file("plan.txt"));
    save_plan_waypoints(plan, tmp.file("wp.csv"));

    std::ifstream steps(tmp.file("plan.txt"));
    std::string text((std::istreambuf_iterator<char>(steps)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("steps 1") != std::string::npos);
    CHECK(text.find("n_r 2 gait T1 n_t 3") != std::string::npos);
    CHECK(text.find("total_cycles 5") != std::string::npos);

    std::ifstream wp(tmp.file("wp.csv"));
    std::string header;
    std::getline(wp, header);
    CHECK(header == "cycle,x,y,theta,gait_id");
    std::string row0;
    std::getline(wp, row0);
    CHECK(row0 == "0,1,1,0,-");
}

#include "gaitnav/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gaitnav {

namespace {

std::string fmt(double v)
{
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double to_double(const std::string& s, const std::string& context)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(context + ": bad number '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& context)
{
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(context + ": bad integer '" + s + "'");
    }
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    return in;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    return out;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

World parse_world(std::istream& in, const std::string& origin)
{
    World world;
    int width = -1;
    int height = -1;
    bool saw_start = false;
    bool saw_goal = false;
    std::string line;
    bool grid_reached = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        std::istringstream ls(t);
        std::string key;
        ls >> key;
        if (key == "grid") {
            grid_reached = true;
            break;
        }
        std::vector<std::string> vals;
        std::string v;
        while (ls >> v) {
            vals.push_back(v);
        }
        auto need = [&](std::size_t n) {
            if (vals.size() != n) {
                throw ParseError(origin + ": key '" + key + "' needs " + std::to_string(n) +
                                 " value(s)");
            }
        };
        if (key == "width") {
            need(1);
            width = to_int(vals[0], origin);
        } else if (key == "height") {
            need(1);
            height = to_int(vals[0], origin);
        } else if (key == "resolution") {
            need(1);
            world.resolution = to_double(vals[0], origin);
        } else if (key == "c_max") {
            need(1);
            world.params.c_max = to_double(vals[0], origin);
        } else if (key == "lambda") {
            need(1);
            world.params.lambda = to_double(vals[0], origin);
        } else if (key == "occ_threshold") {
            need(1);
            world.params.occ_threshold = to_double(vals[0], origin);
        } else if (key == "start") {
            need(3);
            world.start = Pose2{to_double(vals[0], origin), to_double(vals[1], origin),
                                to_double(vals[2], origin)};
            saw_start = true;
        } else if (key == "goal") {
            need(2);
            world.goal = {to_double(vals[0], origin), to_double(vals[1], origin)};
            saw_goal = true;
        } else if (key == "delta_goal") {
            need(1);
            world.delta_goal = to_double(vals[0], origin);
        } else {
            throw ParseError(origin + ": unknown key '" + key + "'");
        }
    }
    if (!grid_reached) {
        throw ParseError(origin + ": missing 'grid' section");
    }
    if (width <= 0 || height <= 0) {
        throw ParseError(origin + ": width/height missing or not positive");
    }
    if (!saw_start || !saw_goal) {
        throw ParseError(origin + ": start and goal are required");
    }
    if (!(world.delta_goal > 0.0)) {
        throw ParseError(origin + ": delta_goal must be > 0");
    }

    world.obstacles.width = width;
    world.obstacles.height = height;
    world.obstacles.cells.assign(
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    for (int row = 0; row < height; ++row) {
        if (!std::getline(in, line)) {
            throw ParseError(origin + ": grid ends after " + std::to_string(row) + " rows");
        }
        const std::string cells = trim(line);
        if (static_cast<int>(cells.size()) != width) {
            throw ParseError(origin + ": grid row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " cells, want " +
                             std::to_string(width));
        }
        const int iy = height - 1 - row;  // top row first
        for (int ix = 0; ix < width; ++ix) {
            const char c = cells[static_cast<std::size_t>(ix)];
            if (c == '#') {
                world.obstacles.set(ix, iy, 1);
            } else if (c != '.') {
                throw ParseError(origin + ": grid char '" + std::string(1, c) +
                                 "' is neither '#' nor '.'");
            }
        }
    }
    return world;
}

World load_world(const std::string& path)
{
    auto in = open_input(path);
    return parse_world(in, path);
}

void save_world(const World& world, const std::string& path)
{
    auto out = open_output(path);
    out << "width " << world.obstacles.width << "\n";
    out << "height " << world.obstacles.height << "\n";
    out << "resolution " << fmt(world.resolution) << "\n";
    out << "c_max " << fmt(world.params.c_max) << "\n";
    out << "lambda " << fmt(world.params.lambda) << "\n";
    out << "occ_threshold " << fmt(world.params.occ_threshold) << "\n";
    out << "start " << fmt(world.start.x) << ' ' << fmt(world.start.y) << ' '
        << fmt(world.start.theta) << "\n";
    out << "goal " << fmt(world.goal.x()) << ' ' << fmt(world.goal.y()) << "\n";
    out << "delta_goal " << fmt(world.delta_goal) << "\n";
    out << "grid\n";
    for (int row = 0; row < world.obstacles.height; ++row) {
        const int iy = world.obstacles.height - 1 - row;
        for (int ix = 0; ix < world.obstacles.width; ++ix) {
            out << (world.obstacles.at(ix, iy) ? '#' : '.');
        }
        out << "\n";
    }
}

BinaryGrid load_obstacles_pbm(const std::string& path)
{
    auto in = open_input(path);
    auto next_token = [&]() -> std::string {
        std::string tok;
        while (in) {
            const int c = in.peek();
            if (c == EOF) {
                break;
            }
            if (c == '#') {
                std::string comment;
                std::getline(in, comment);
                continue;
            }
            if (std::isspace(c)) {
                in.get();
                continue;
            }
            in >> tok;
            return tok;
        }
        throw ParseError(path + ": truncated PBM");
    };

    const std::string magic = next_token();
    if (magic != "P1" && magic != "P4") {
        throw ParseError(path + ": not a PBM file (magic '" + magic + "')");
    }
    const int width = to_int(next_token(), path);
    const int height = to_int(next_token(), path);
    if (width <= 0 || height <= 0) {
        throw ParseError(path + ": bad PBM dimensions");
    }

    BinaryGrid grid;
    grid.width = width;
    grid.height = height;
    grid.cells.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);

    if (magic == "P1") {
        int count = 0;
        while (count < width * height) {
            const int c = in.get();
            if (c == EOF) {
                throw ParseError(path + ": truncated P1 data");
            }
            if (c == '#') {
                std::string comment;
                std::getline(in, comment);
                continue;
            }
            if (c == '0' || c == '1') {
                const int row = count / width;
                const int col = count % width;
                grid.set(col, height - 1 - row, c == '1' ? 1 : 0);
                ++count;
            } else if (!std::isspace(c)) {
                throw ParseError(path + ": bad P1 character");
            }
        }
    } else {
        in.get();  // single whitespace after the header
        const int row_bytes = (width + 7) / 8;
        std::vector<char> row(static_cast<std::size_t>(row_bytes));
        for (int r = 0; r < height; ++r) {
            in.read(row.data(), row_bytes);
            if (in.gcount() != row_bytes) {
                throw ParseError(path + ": truncated P4 data");
            }
            for (int col = 0; col < width; ++col) {
                const unsigned char byte =
                    static_cast<unsigned char>(row[static_cast<std::size_t>(col / 8)]);
                const bool set = (byte >> (7 - col % 8)) & 1;
                grid.set(col, height - 1 - r, set ? 1 : 0);
            }
        }
    }
    return grid;
}

TrialLog load_trial_log(const std::string& path, int limb_count)
{
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path + ": empty file");
    }
    if (trim(line) != "trial,step,from_state,to_state,dx,dy,dtheta") {
        throw ParseError(path + ": bad trial log header '" + trim(line) + "'");
    }
    TrialLog log;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        const auto f = split(t, ',');
        const std::string ctx = path + ":" + std::to_string(lineno);
        if (f.size() != 7) {
            throw ParseError(ctx + ": expected 7 fields, got " + std::to_string(f.size()));
        }
        TrialSample s;
        s.trial = to_int(f[0], ctx);
        s.step = to_int(f[1], ctx);
        if (static_cast<int>(f[2].size()) != limb_count ||
            static_cast<int>(f[3].size()) != limb_count) {
            throw ParseError(ctx + ": state strings must have " + std::to_string(limb_count) +
                             " digits");
        }
        s.from = state_from_string(f[2]);
        s.to = state_from_string(f[3]);
        s.displacement = {to_double(f[4], ctx), to_double(f[5], ctx), to_double(f[6], ctx)};
        log.push_back(s);
    }
    return log;
}

void save_trial_log(const TrialLog& log, int limb_count, const std::string& path)
{
    auto out = open_output(path);
    out << "trial,step,from_state,to_state,dx,dy,dtheta\n";
    for (const auto& s : log) {
        out << s.trial << ',' << s.step << ',' << state_to_string(s.from, limb_count) << ','
            << state_to_string(s.to, limb_count) << ',' << fmt(s.displacement(0)) << ','
            << fmt(s.displacement(1)) << ',' << fmt(s.displacement(2)) << "\n";
    }
}

namespace {

GaitModel parse_model_fields(const std::string& id, GaitKind kind,
                             const std::vector<double>& twist,
                             const std::vector<double>& cov, double period)
{
    GaitModel m;
    m.id = id;
    m.kind = kind;
    m.twist = CycleTwist{twist[0], twist[1], twist[2]};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            m.covariance(r, c) = cov[static_cast<std::size_t>(r * 3 + c)];
        }
    }
    m.period_s = period;
    m.validate();
    return m;
}

}  // namespace

std::vector<Gait> load_gait_library(const std::string& path)
{
    auto in = open_input(path);
    std::vector<Gait> library;

    std::string line;
    int lineno = 0;
    bool in_doc = false;
    std::string id;
    std::string kind_str;
    std::vector<RobotState> states;
    std::vector<double> twist, cov, mtwist, mcov;
    double period = -1.0, mperiod = -1.0;

    auto flush = [&]() {
        if (!in_doc) {
            return;
        }
        const std::string ctx = path + ": gait '" + id + "'";
        if (id.empty() || kind_str.empty() || states.empty() || twist.size() != 3 ||
            cov.size() != 9 || period <= 0.0) {
            throw ParseError(ctx + ": incomplete document (need id, kind, states, twist, "
                                   "covariance, period)");
        }
        Gait g;
        g.id = id;
        g.kind = gait_kind_from_string(kind_str);
        g.state_cycle = states;
        g.predicted = parse_model_fields(id, g.kind, twist, cov, period);
        const bool any_measured = !mtwist.empty() || !mcov.empty() || mperiod > 0.0;
        if (any_measured) {
            if (mtwist.size() != 3 || mcov.size() != 9) {
                throw ParseError(ctx + ": measured model needs measured_twist and "
                                       "measured_covariance");
            }
            g.measured = parse_model_fields(id, g.kind, mtwist, mcov,
                                            mperiod > 0.0 ? mperiod : period);
        }
        library.push_back(std::move(g));
        in_doc = false;
        id.clear();
        kind_str.clear();
        states.clear();
        twist.clear();
        cov.clear();
        mtwist.clear();
        mcov.clear();
        period = -1.0;
        mperiod = -1.0;
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        const std::string ctx = path + ":" + std::to_string(lineno);
        if (t.empty()) {
            flush();
            continue;
        }
        if (t[0] == '#') {
            continue;
        }
        std::istringstream ls(t);
        std::string key;
        ls >> key;
        in_doc = true;
        if (key == "id") {
            ls >> id;
        } else if (key == "kind") {
            ls >> kind_str;
        } else if (key == "states") {
            std::string s;
            while (ls >> s) {
                states.push_back(state_from_string(s));
            }
        } else if (key == "twist" || key == "measured_twist") {
            auto& dst = key == "twist" ? twist : mtwist;
            std::string v;
            while (ls >> v) {
                dst.push_back(to_double(v, ctx));
            }
            if (dst.size() != 3) {
                throw ParseError(ctx + ": twist needs 3 values");
            }
        } else if (key == "covariance" || key == "measured_covariance") {
            auto& dst = key == "covariance" ? cov : mcov;
            std::string v;
            while (ls >> v) {
                dst.push_back(to_double(v, ctx));
            }
            if (dst.size() != 9) {
                throw ParseError(ctx + ": covariance needs 9 row-major values");
            }
        } else if (key == "period" || key == "measured_period") {
            std::string v;
            ls >> v;
            (key == "period" ? period : mperiod) = to_double(v, ctx);
        } else {
            throw ParseError(ctx + ": unknown key '" + key + "'");
        }
    }
    flush();
    if (library.empty()) {
        throw ParseError(path + ": no gaits found");
    }
    return library;
}

namespace {

void write_model_fields(std::ofstream& out, const GaitModel& m, const std::string& prefix)
{
    out << prefix << "twist " << fmt(m.twist.px) << ' ' << fmt(m.twist.py) << ' '
        << fmt(m.twist.omega) << "\n";
    out << prefix << "covariance";
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            out << ' ' << fmt(m.covariance(r, c));
        }
    }
    out << "\n";
    out << prefix << "period " << fmt(m.period_s) << "\n";
}

}  // namespace

void save_gait_library(const std::vector<Gait>& library, int limb_count,
                       const std::string& path)
{
    auto out = open_output(path);
    bool first = true;
    for (const auto& g : library) {
        if (!first) {
            out << "\n";
        }
        first = false;
        out << "id " << g.id << "\n";
        out << "kind " << to_string(g.kind) << "\n";
        out << "states";
        for (const auto& s : g.state_cycle) {
            out << ' ' << state_to_string(s, limb_count);
        }
        out << "\n";
        write_model_fields(out, g.predicted, "");
        if (g.measured) {
            write_model_fields(out, *g.measured, "measured_");
        }
    }
}

std::vector<MarkerObservation> load_marker_replay(const std::string& path)
{
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "frame,t,x,y") {
        throw ParseError(path + ": bad replay header (want 'frame,t,x,y')");
    }
    std::vector<MarkerObservation> replay;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(lineno);
        const auto f = split(t, ',');
        if (f.size() != 4) {
            throw ParseError(ctx + ": expected 4 fields");
        }
        const int frame = to_int(f[0], ctx);
        if (replay.empty() || replay.back().frame != frame) {
            if (!replay.empty() && frame < replay.back().frame) {
                throw ParseError(ctx + ": frames must be non-decreasing");
            }
            MarkerObservation obs;
            obs.frame = frame;
            obs.t = to_double(f[1], ctx);
            replay.push_back(obs);
        }
        replay.back().points.emplace_back(to_double(f[2], ctx), to_double(f[3], ctx));
    }
    return replay;
}

void save_marker_replay(const std::vector<MarkerObservation>& replay, const std::string& path)
{
    auto out = open_output(path);
    out << "frame,t,x,y\n";
    for (const auto& obs : replay) {
        for (const auto& p : obs.points) {
            out << obs.frame << ',' << fmt(obs.t) << ',' << fmt(p.x()) << ',' << fmt(p.y())
                << "\n";
        }
    }
}

void save_pose_stream(const std::vector<PoseSample>& stream, const std::string& path)
{
    auto out = open_output(path);
    out << "frame,t,x,y,theta,n_visible\n";
    for (const auto& s : stream) {
        out << s.frame << ',' << fmt(s.t) << ',' << fmt(s.pose.x) << ',' << fmt(s.pose.y)
            << ',' << fmt(s.pose.theta) << ',' << s.n_visible << "\n";
    }
}

MarkerTemplate load_marker_template(const std::string& path)
{
    auto in = open_input(path);
    MarkerTemplate tmpl;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        std::istringstream ls(t);
        double x = 0.0, y = 0.0;
        if (!(ls >> x >> y)) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": want 'x y'");
        }
        tmpl.points.emplace_back(x, y);
    }
    tmpl.validate();
    return tmpl;
}

void save_plan_steps(const TrajectoryPlan& plan, const std::vector<std::string>& gait_ids,
                     const std::string& path)
{
    auto out = open_output(path);
    out << "start " << fmt(plan.start.x) << ' ' << fmt(plan.start.y) << ' '
        << fmt(plan.start.theta) << "\n";
    out << "steps " << plan.steps.size() << "\n";
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& s = plan.steps[i];
        out << "step " << (i + 1) << ": n_r " << s.n_r << " gait "
            << gait_ids.at(static_cast<std::size_t>(s.gait_index)) << " n_t " << s.n_t
            << " end " << fmt(s.predicted_end.x) << ' ' << fmt(s.predicted_end.y) << ' '
            << fmt(s.predicted_end.theta) << "\n";
    }
    out << "total_cycles " << plan.total_cycles() << "\n";
}

void save_plan_waypoints(const TrajectoryPlan& plan, const std::string& path)
{
    auto out = open_output(path);
    out << "cycle,x,y,theta,gait_id\n";
    out << "0," << fmt(plan.start.x) << ',' << fmt(plan.start.y) << ','
        << fmt(plan.start.theta) << ",-\n";
    for (const auto& wp : plan.waypoints) {
        out << wp.cycle << ',' << fmt(wp.pose.x) << ',' << fmt(wp.pose.y) << ','
            << fmt(wp.pose.theta) << ',' << wp.gait_id << "\n";
    }
}

void save_run_record(const RunRecord& record, const std::string& path)
{
    auto out = open_output(path);
    out << "cycle,planned_x,planned_y,planned_th,true_x,true_y,true_th,"
           "est_x,est_y,est_th,pos_err,ori_err,gait,event,phase_end\n";
    for (const auto& r : record.cycles) {
        out << r.cycle << ',' << fmt(r.planned.x) << ',' << fmt(r.planned.y) << ','
            << fmt(r.planned.theta) << ',' << fmt(r.true_pose.x) << ',' << fmt(r.true_pose.y)
            << ',' << fmt(r.true_pose.theta) << ',' << fmt(r.estimated.x) << ','
            << fmt(r.estimated.y) << ',' << fmt(r.estimated.theta) << ',' << fmt(r.pos_err)
            << ',' << fmt(r.ori_err) << ',' << r.gait_id << ',' << to_string(r.event) << ','
            << (r.phase_end ? 1 : 0) << "\n";
    }
}

std::vector<CycleRecord> load_run_record(const std::string& path)
{
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path + ": empty file");
    }
    const std::string want =
        "cycle,planned_x,planned_y,planned_th,true_x,true_y,true_th,"
        "est_x,est_y,est_th,pos_err,ori_err,gait,event,phase_end";
    if (trim(line) != want) {
        throw ParseError(path + ": bad run record header");
    }
    std::vector<CycleRecord> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(lineno);
        const auto f = split(t, ',');
        if (f.size() != 15) {
            throw ParseError(ctx + ": expected 15 fields");
        }
        CycleRecord r;
        r.cycle = to_int(f[0], ctx);
        r.planned = {to_double(f[1], ctx), to_double(f[2], ctx), to_double(f[3], ctx)};
        r.true_pose = {to_double(f[4], ctx), to_double(f[5], ctx), to_double(f[6], ctx)};
        r.estimated = {to_double(f[7], ctx), to_double(f[8], ctx), to_double(f[9], ctx)};
        r.pos_err = to_double(f[10], ctx);
        r.ori_err = to_double(f[11], ctx);
        r.gait_id = f[12];
        if (f[13] == "none") {
            r.event = CycleEvent::kNone;
        } else if (f[13] == "gait_switch") {
            r.event = CycleEvent::kGaitSwitch;
        } else if (f[13] == "replan") {
            r.event = CycleEvent::kReplan;
        } else {
            throw ParseError(ctx + ": unknown event '" + f[13] + "'");
        }
        r.phase_end = to_int(f[14], ctx) != 0;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace gaitnav

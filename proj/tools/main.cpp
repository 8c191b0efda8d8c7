// gaitnav command-line tool: gait synthesis from trial logs, lattice
// planning, closed-loop simulation, tracking replay, and SVG rendering.

#include "gaitnav/closed_loop.hpp"
#include "gaitnav/costmap.hpp"
#include "gaitnav/gait_graph.hpp"
#include "gaitnav/gait_synth.hpp"
#include "gaitnav/io.hpp"
#include "gaitnav/lattice_planner.hpp"
#include "gaitnav/pose_track.hpp"
#include "gaitnav/svg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace gaitnav;

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out << text;
}

// ---- gen-log ----------------------------------------------------------

struct GenLogArgs {
    std::string out;
    int limbs = 4;
    int trials = 5;
    std::uint64_t seed = 1;
    double noise = 1.0;
};

// Ground-truth motion-primitive model: a low-variance translation cycle
// and an in-place rotation cycle planted in an otherwise mediocre graph.
void run_gen_log(const GenLogArgs& args)
{
    const auto graph = complete_state_graph(args.limbs);
    std::mt19937_64 rng(args.seed);
    std::normal_distribution<double> gauss;

    const int m = graph.edge_count();
    std::vector<Eigen::Vector3d> mean(static_cast<std::size_t>(m));
    std::vector<Eigen::Vector3d> sigma(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
        mean[static_cast<std::size_t>(e)] = {0.25 * gauss(rng), 0.25 * gauss(rng),
                                             0.12 * gauss(rng)};
        const double sp = 0.04 + 0.05 * std::abs(gauss(rng));
        sigma[static_cast<std::size_t>(e)] = {sp, sp, 0.02 + 0.02 * std::abs(gauss(rng))};
    }

    auto plant = [&](const std::vector<std::string>& states,
                     const std::vector<Eigen::Vector3d>& means, double sp, double st) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            const int from = graph.vertex_index(state_from_string(states[i]));
            const int to =
                graph.vertex_index(state_from_string(states[(i + 1) % states.size()]));
            const int e = *graph.edge_index(from, to);
            mean[static_cast<std::size_t>(e)] = means[i];
            sigma[static_cast<std::size_t>(e)] = {sp, sp, st};
        }
    };
    if (args.limbs == 4) {
        // translation wave: strong +x, net rotation ~zero
        plant({"0000", "1000", "1100", "0100"},
              {{0.35, 0.04, 0.02}, {0.30, -0.05, -0.03}, {0.33, 0.03, 0.015},
               {0.32, -0.02, -0.005}},
              0.01, 0.005);
        // rotation wave: one limb at a time, near-zero per-edge translation
        plant({"1000", "0100", "0010", "0001"},
              {{0.02, 0.01, 0.12}, {-0.01, 0.02, 0.13}, {0.015, -0.02, 0.12},
               {-0.02, -0.01, 0.125}},
              0.008, 0.01);
    }

    TrialLog log;
    std::uniform_int_distribution<int> pick_start(0, graph.vertex_count() - 1);
    for (int trial = 1; trial <= args.trials; ++trial) {
        const int start = pick_start(rng);
        const auto walk = euler_cycle(graph, start, rng());
        int step = 0;
        for (int e : walk) {
            const auto& mu = mean[static_cast<std::size_t>(e)];
            const auto& sd = sigma[static_cast<std::size_t>(e)];
            TrialSample s;
            s.trial = trial;
            s.step = step++;
            s.from = graph.vertices()[static_cast<std::size_t>(graph.edge(e).from)];
            s.to = graph.vertices()[static_cast<std::size_t>(graph.edge(e).to)];
            s.displacement = {mu(0) + args.noise * sd(0) * gauss(rng),
                              mu(1) + args.noise * sd(1) * gauss(rng),
                              mu(2) + args.noise * sd(2) * gauss(rng)};
            log.push_back(s);
        }
    }
    save_trial_log(log, args.limbs, args.out);
    std::cout << "wrote " << log.size() << " samples (" << args.trials << " trials x "
              << m << " edges) to " << args.out << "\n";
}

// ---- synth ------------------------------------------------------------

struct SynthArgs {
    std::string log;
    std::string out;
    int limbs = 4;
    bool allow_partial = false;
    double transition_time = 0.45;
    std::vector<double> alpha_t{-1.0, 0.0};
    SynthesisWeights weights;
    SynthesisConstraints constraints;
};

void run_synth(const SynthArgs& args)
{
    SynthesisWeights weights = args.weights;
    if (args.alpha_t.size() != 2) {
        throw std::invalid_argument("--alpha-t needs exactly 2 values");
    }
    weights.alpha_t = {args.alpha_t[0], args.alpha_t[1]};
    weights.validate();
    args.constraints.validate();

    const auto graph = complete_state_graph(args.limbs);
    const auto trial_log = load_trial_log(args.log, args.limbs);
    const auto estimated = estimate_weights(graph, trial_log, args.allow_partial);

    Gait rotation =
        synthesize_rotation(estimated, weights, args.constraints, args.transition_time);
    rotation.id = "R";
    rotation.predicted.id = "R";
    Gait t1 =
        synthesize_translation(estimated, weights, args.constraints, args.transition_time);
    t1.id = "T1";
    t1.predicted.id = "T1";

    std::vector<Gait> library{rotation, t1};
    if (args.limbs == 4) {
        for (int q = 1; q <= 3; ++q) {
            Gait t = permute_gait(t1, q);
            t.id = "T" + std::to_string(q + 1);
            t.predicted.id = t.id;
            library.push_back(std::move(t));
        }
    }
    save_gait_library(library, args.limbs, args.out);

    std::cout << "gait library -> " << args.out << "\n";
    for (const auto& g : library) {
        const auto& tw = g.model().twist;
        std::cout << "  " << g.id << " (" << to_string(g.kind) << ", " << g.length()
                  << " transitions): twist [" << tw.px << ", " << tw.py << ", " << tw.omega
                  << "] period " << g.model().period_s << " s\n";
    }
}

// ---- plan -------------------------------------------------------------

struct LibrarySplit {
    GaitModel rotation;
    std::vector<GaitModel> translations;
    std::vector<std::string> translation_ids;
};

LibrarySplit split_for_planning(const std::vector<Gait>& library)
{
    LibrarySplit out;
    bool have_rotation = false;
    for (const auto& g : library) {
        GaitModel m = g.model();
        m.id = g.id;
        m.kind = g.kind;
        if (g.kind == GaitKind::kRotation && !have_rotation) {
            out.rotation = m;
            have_rotation = true;
        } else if (g.kind == GaitKind::kTranslation) {
            out.translations.push_back(m);
            out.translation_ids.push_back(g.id);
        }
    }
    if (!have_rotation || out.translations.empty()) {
        throw std::invalid_argument(
            "library needs one rotation gait and at least one translation gait");
    }
    return out;
}

struct PlanArgs {
    std::string world;
    std::string library;
    std::string out;
    std::string obstacles_pbm;
    PlannerConfig config;
    double delta_goal_override = 0.0;
    bool no_zero_rotation = false;
};

void run_plan(const PlanArgs& args)
{
    World world = load_world(args.world);
    if (!args.obstacles_pbm.empty()) {
        world.obstacles = load_obstacles_pbm(args.obstacles_pbm);
    }
    if (args.delta_goal_override > 0.0) {
        world.delta_goal = args.delta_goal_override;
    }
    const auto library = load_gait_library(args.library);
    const auto split = split_for_planning(library);

    PlannerConfig cfg = args.config;
    cfg.delta_goal = world.delta_goal;
    cfg.allow_zero_rotation = !args.no_zero_rotation;
    cfg.validate();

    const CostMap map = world.build_map();
    const CostToGoField ctg = cost_to_go(map, world.goal);
    ExplorationLog log;
    const TrajectoryPlan result = plan(world.start, world.goal, split.rotation,
                                       split.translations, map, ctg, cfg, &log);

    save_plan_steps(result, split.translation_ids, args.out + ".plan.txt");
    save_plan_waypoints(result, args.out + ".waypoints.csv");
    write_text(args.out + ".svg",
               render_plan_svg(world, map, result, &log, split.translation_ids));
    std::cout << "plan: " << result.steps.size() << " steps, " << result.total_cycles()
              << " cycles -> " << args.out << ".{plan.txt,waypoints.csv,svg}\n";
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::string world;
    std::string library;
    std::string out;
    std::string obstacles_pbm;
    std::string mode = "threshold";
    std::string feedback = "markers";
    std::string emit_markers;
    int runs = 1;
    SimConfig config;
};

int run_simulate(const SimulateArgs& args)
{
    World world = load_world(args.world);
    if (!args.obstacles_pbm.empty()) {
        world.obstacles = load_obstacles_pbm(args.obstacles_pbm);
    }
    const auto library = load_gait_library(args.library);

    SimConfig cfg = args.config;
    cfg.policy.mode = replan_mode_from_string(args.mode);
    if (args.feedback == "markers") {
        cfg.feedback = FeedbackMode::kMarkers;
    } else if (args.feedback == "perfect") {
        cfg.feedback = FeedbackMode::kPerfect;
    } else {
        throw std::invalid_argument("--feedback must be markers or perfect");
    }
    cfg.policy.validate();
    cfg.planner.validate();

    if (args.runs > 1) {
        std::vector<std::uint64_t> seeds;
        for (int i = 0; i < args.runs; ++i) {
            seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
        }
        const BatchStats stats = batch_run(world, library, cfg, seeds);
        std::cout << "seed,success,replans,cycles,failure\n";
        for (const auto& r : stats.runs) {
            std::cout << r.seed << ',' << (r.success ? 1 : 0) << ',' << r.replans << ','
                      << r.cycles << ',' << r.failure_reason << "\n";
        }
        std::cout << "# runs " << stats.runs.size() << ", success rate "
                  << stats.success_rate << ", mean replans " << stats.mean_replans
                  << ", mean cycles " << stats.mean_cycles << "\n";
        return 0;
    }

    std::vector<MarkerObservation> markers;
    if (!args.emit_markers.empty()) {
        cfg.emit_markers = &markers;
    }
    RunRecord rec;
    bool success = false;
    std::string failure;
    try {
        rec = run(world, library, cfg);
        success = rec.success;
    } catch (const RunError& e) {
        rec = e.record;
        failure = e.what();
    }
    save_run_record(rec, args.out + ".record.csv");
    const CostMap map = world.build_map();
    write_text(args.out + ".svg", render_run_svg(world, map, rec));
    if (!args.emit_markers.empty()) {
        save_marker_replay(markers, args.emit_markers);
    }
    std::cout << (success ? "success" : "failure") << ": " << rec.total_cycles
              << " cycles, " << rec.replan_count << " replans -> " << args.out
              << ".{record.csv,svg}\n";
    if (!success) {
        std::cout << "reason: " << failure << "\n";
    }
    return success ? 0 : 1;
}

// ---- track --------------------------------------------------------------

struct TrackArgs {
    std::string replay;
    std::string tmpl;
    std::string out;
    double gate = -1.0;
};

void run_track(const TrackArgs& args)
{
    const auto replay = load_marker_replay(args.replay);
    MarkerTemplate tmpl = args.tmpl.empty() ? MarkerTemplate::default_layout()
                                            : load_marker_template(args.tmpl);
    TrackerConfig cfg;
    cfg.gating_radius = args.gate;
    MarkerTracker tracker(std::move(tmpl), cfg);

    std::vector<PoseSample> stream;
    for (const auto& obs : replay) {
        const auto upd = tracker.update(obs);
        stream.push_back(PoseSample{obs.frame, obs.t, upd.pose, upd.n_visible});
    }
    save_pose_stream(stream, args.out);
    std::cout << "tracked " << stream.size() << " frames -> " << args.out << "\n";
}

// ---- render ---------------------------------------------------------------

struct RenderArgs {
    std::string world;
    std::string record;
    std::string out;
};

void run_render(const RenderArgs& args)
{
    const World world = load_world(args.world);
    const auto cycles = load_run_record(args.record);
    const CostMap map = world.build_map();
    write_text(args.out, render_record_svg(world, map, cycles));
    std::cout << "rendered " << cycles.size() << " cycles -> " << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gait-based soft-robot navigation: synthesis, planning, simulation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; command-line flags override it");

    GenLogArgs gen;
    auto* cmd_gen = app.add_subcommand("gen-log", "generate a synthetic trial log");
    cmd_gen->add_option("--out", gen.out, "output trial log CSV")->required();
    cmd_gen->add_option("--limbs", gen.limbs, "limb count")->check(CLI::Range(1, 8));
    cmd_gen->add_option("--trials", gen.trials, "Euler-cycle repetitions")
        ->check(CLI::PositiveNumber);
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");
    cmd_gen->add_option("--noise", gen.noise, "sample noise scale")
        ->check(CLI::NonNegativeNumber);

    SynthArgs synth;
    auto* cmd_synth =
        app.add_subcommand("synth", "synthesize a gait library from a trial log");
    cmd_synth->add_option("--log", synth.log, "trial log CSV")->required();
    cmd_synth->add_option("--out", synth.out, "output gait library")->required();
    cmd_synth->add_option("--limbs", synth.limbs, "limb count")->check(CLI::Range(1, 8));
    cmd_synth->add_flag("--allow-partial", synth.allow_partial,
                        "drop edges missing from the log instead of failing");
    cmd_synth->add_option("--transition-time", synth.transition_time,
                          "seconds per primitive transition")
        ->check(CLI::PositiveNumber);
    cmd_synth->add_option("--alpha-t", synth.alpha_t,
                          "translation direction weight (use -d to maximize along d)")
        ->expected(2);
    cmd_synth->add_option("--beta-t", synth.weights.beta_t, "translation variance weight");
    cmd_synth->add_option("--gamma-t", synth.weights.gamma_t, "translation length weight");
    cmd_synth->add_option("--alpha-theta", synth.weights.alpha_theta, "rotation weight");
    cmd_synth->add_option("--beta-theta", synth.weights.beta_theta,
                          "rotation variance weight");
    cmd_synth->add_option("--gamma-theta", synth.weights.gamma_theta,
                          "rotation length weight");
    cmd_synth->add_option("--eps-theta", synth.constraints.eps_theta,
                          "net-rotation bound for translation gaits");
    cmd_synth->add_option("--eps-p", synth.constraints.eps_p,
                          "per-edge displacement bound for rotation gaits");
    cmd_synth->add_option("--max-cycle-len", synth.constraints.max_cycle_len,
                          "simple-cycle length cap");

    PlanArgs planner;
    auto* cmd_plan = app.add_subcommand("plan", "plan a trajectory through a world");
    cmd_plan->add_option("--world", planner.world, "world file")->required();
    cmd_plan->add_option("--library", planner.library, "gait library file")->required();
    cmd_plan->add_option("--out", planner.out, "output prefix")->required();
    cmd_plan->add_option("--n-t-max", planner.config.n_t_max,
                         "max consecutive translation cycles");
    cmd_plan->add_option("--max-iterations", planner.config.max_iterations,
                         "planner iteration cap");
    cmd_plan->add_option("--delta-goal", planner.delta_goal_override,
                         "override the world's goal radius")
        ->check(CLI::PositiveNumber);
    cmd_plan->add_flag("--no-zero-rotation", planner.no_zero_rotation,
                       "require at least one rotation cycle per step");
    cmd_plan->add_option("--obstacles-pbm", planner.obstacles_pbm,
                         "replace the world's obstacle layer with a PBM image");

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "closed-loop run(s) on a world");
    cmd_sim->add_option("--world", sim.world, "world file")->required();
    cmd_sim->add_option("--library", sim.library, "gait library file")->required();
    cmd_sim->add_option("--out", sim.out, "output prefix (single run)")->required();
    cmd_sim->add_option("--seed", sim.config.seed, "RNG seed (first seed in batch)");
    cmd_sim->add_option("--runs", sim.runs, "number of seeded runs")
        ->check(CLI::PositiveNumber);
    cmd_sim->add_option("--mode", sim.mode, "replan policy: threshold|interval|both|none");
    cmd_sim->add_option("--threshold", sim.config.policy.error_threshold,
                        "replan position-error threshold");
    cmd_sim->add_option("--interval", sim.config.policy.interval,
                        "replan every N gait cycles");
    cmd_sim->add_option("--noise", sim.config.noise_scale,
                        "noise scale on gait covariance (0 disables)")
        ->check(CLI::NonNegativeNumber);
    cmd_sim->add_option("--heavy-tail", sim.config.heavy_tail_scale,
                        "heavy-tail std multiplier (1 = pure Gaussian)")
        ->check(CLI::NonNegativeNumber);
    cmd_sim->add_option("--feedback", sim.feedback, "pose feedback: markers|perfect");
    cmd_sim->add_option("--obs-noise", sim.config.observation_noise,
                        "marker observation noise std")
        ->check(CLI::NonNegativeNumber);
    cmd_sim->add_option("--budget", sim.config.cycle_budget, "cycle budget")
        ->check(CLI::PositiveNumber);
    cmd_sim->add_option("--n-t-max", sim.config.planner.n_t_max,
                        "max consecutive translation cycles");
    cmd_sim->add_option("--emit-markers", sim.emit_markers,
                        "write the synthetic marker replay to this file");
    cmd_sim->add_option("--obstacles-pbm", sim.obstacles_pbm,
                        "replace the world's obstacle layer with a PBM image");

    TrackArgs track;
    auto* cmd_track =
        app.add_subcommand("track", "replay marker observations into poses");
    cmd_track->add_option("--replay", track.replay, "marker replay CSV")->required();
    cmd_track->add_option("--template", track.tmpl,
                          "marker template file (default: built-in hub layout)");
    cmd_track->add_option("--out", track.out, "output pose stream CSV")->required();
    cmd_track->add_option("--gate", track.gate,
                          "association gating radius (default: half min marker spacing)");

    RenderArgs render;
    auto* cmd_render = app.add_subcommand("render", "render a run record to SVG");
    cmd_render->add_option("--world", render.world, "world file")->required();
    cmd_render->add_option("--record", render.record, "run record CSV")->required();
    cmd_render->add_option("--out", render.out, "output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_gen->parsed()) {
            run_gen_log(gen);
        } else if (cmd_synth->parsed()) {
            run_synth(synth);
        } else if (cmd_plan->parsed()) {
            run_plan(planner);
        } else if (cmd_sim->parsed()) {
            return run_simulate(sim);
        } else if (cmd_track->parsed()) {
            run_track(track);
        } else if (cmd_render->parsed()) {
            run_render(render);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "gaitnav/gait_synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gaitnav {

void SynthesisWeights::validate() const
{
    const double vals[] = {alpha_t.x(), alpha_t.y(), beta_t,       gamma_t,
                           alpha_theta, beta_theta,  gamma_theta};
    for (double v : vals) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("synthesis weights must be finite");
        }
    }
    if (gamma_t < 0.0 || gamma_theta < 0.0) {
        throw std::invalid_argument("gait-length weights gamma must be >= 0");
    }
}

void SynthesisConstraints::validate() const
{
    if (eps_theta < 0.0 || eps_p < 0.0) {
        throw std::invalid_argument("constraint bounds eps must be >= 0");
    }
    if (max_cycle_len < 2) {
        throw std::invalid_argument("max_cycle_len must be >= 2");
    }
}

std::vector<int> gait_edge_ids(const Gait& gait, const GaitGraph& graph)
{
    const int len = gait.length();
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        const int from = graph.vertex_index(gait.state_cycle[static_cast<std::size_t>(i)]);
        const int to = graph.vertex_index(gait.state_cycle[static_cast<std::size_t>((i + 1) % len)]);
        const auto e = graph.edge_index(from, to);
        if (!e) {
            throw UnknownEdgeError("gait '" + gait.id + "' uses transition " +
                                   state_to_string(gait.state_cycle[static_cast<std::size_t>(i)], graph.limb_count()) +
                                   " -> " +
                                   state_to_string(gait.state_cycle[static_cast<std::size_t>((i + 1) % len)], graph.limb_count()) +
                                   " which is not an edge of the graph");
        }
        ids.push_back(*e);
    }
    return ids;
}

Eigen::VectorXd gait_indicator(const Gait& gait, const GaitGraph& graph)
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(graph.edge_count());
    for (int e : gait_edge_ids(gait, graph)) {
        z(e) = 1.0;
    }
    return z;
}

Gait rebind_gait(Gait gait, const GaitGraph& graph)
{
    gait.edge_ids = gait_edge_ids(gait, graph);
    return gait;
}

std::vector<SimpleCycle> enumerate_simple_cycles(const GaitGraph& graph, int max_len)
{
    if (max_len < 2) {
        throw std::invalid_argument("max_len must be >= 2");
    }
    const int n = graph.vertex_count();
    std::vector<SimpleCycle> cycles;
    std::vector<char> on_path(static_cast<std::size_t>(n), 0);
    std::vector<int> path;
    std::vector<int> path_edges;

    // Canonical start = smallest vertex; extensions only visit larger ones.
    auto dfs = [&](auto&& self, int start, int v) -> void {
        for (int e : graph.out_edges(v)) {
            const int w = graph.edge(e).to;
            if (w == start) {
                if (path.size() >= 2) {
                    SimpleCycle c;
                    c.vertices = path;
                    c.edges = path_edges;
                    c.edges.push_back(e);
                    cycles.push_back(std::move(c));
                }
                continue;
            }
            if (w > start && !on_path[static_cast<std::size_t>(w)] &&
                static_cast<int>(path.size()) < max_len) {
                on_path[static_cast<std::size_t>(w)] = 1;
                path.push_back(w);
                path_edges.push_back(e);
                self(self, start, w);
                path_edges.pop_back();
                path.pop_back();
                on_path[static_cast<std::size_t>(w)] = 0;
            }
        }
    };

    for (int s = 0; s < n; ++s) {
        on_path[static_cast<std::size_t>(s)] = 1;
        path.assign(1, s);
        path_edges.clear();
        dfs(dfs, s, s);
        on_path[static_cast<std::size_t>(s)] = 0;
    }
    return cycles;
}

namespace {

Gait make_gait(const GaitGraph& graph, const SimpleCycle& cycle, GaitKind kind,
               double transition_time_s)
{
    Gait g;
    g.kind = kind;
    g.id = kind == GaitKind::kRotation ? "R" : "T";
    g.edge_ids = cycle.edges;
    g.state_cycle.reserve(cycle.vertices.size());
    for (int v : cycle.vertices) {
        g.state_cycle.push_back(graph.vertices()[static_cast<std::size_t>(v)]);
    }

    Pose2 net;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int e : cycle.edges) {
        const auto& w = graph.edge(e).weight;
        net = compose(net, Pose2{w.mean(0), w.mean(1), w.mean(2)});
        cov += w.covariance;
    }
    g.predicted.id = g.id;
    g.predicted.kind = kind;
    g.predicted.twist = CycleTwist{net.x, net.y, net.theta};
    g.predicted.covariance = cov;
    g.predicted.period_s = transition_time_s * static_cast<double>(cycle.edges.size());
    g.predicted.validate();
    return g;
}

// true if cycle a beats b: lower cost, then fewer edges, then
// lexicographic canonical vertex sequence
bool beats(double cost_a, const SimpleCycle& a, double cost_b, const SimpleCycle& b)
{
    if (cost_a != cost_b) {
        return cost_a < cost_b;
    }
    if (a.edges.size() != b.edges.size()) {
        return a.edges.size() < b.edges.size();
    }
    return a.vertices < b.vertices;
}

}  // namespace

Gait synthesize_translation(const GaitGraph& graph, const SynthesisWeights& weights,
                            const SynthesisConstraints& constraints,
                            double transition_time_s)
{
    weights.validate();
    constraints.validate();
    const GraphMatrices mats = matrices(graph);
    const Eigen::RowVectorXd cost_row = weights.alpha_t.transpose() * mats.P +
                                        weights.beta_t * mats.Sp +
                                        weights.gamma_t * Eigen::RowVectorXd::Ones(graph.edge_count());

    const auto cycles = enumerate_simple_cycles(graph, constraints.max_cycle_len);
    const SimpleCycle* best = nullptr;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& c : cycles) {
        double net_theta = 0.0;
        double cost = 0.0;
        for (int e : c.edges) {
            net_theta += mats.Theta(e);
            cost += cost_row(e);
        }
        if (std::abs(net_theta) > constraints.eps_theta) {
            continue;
        }
        if (!best || beats(cost, c, best_cost, *best)) {
            best = &c;
            best_cost = cost;
        }
    }
    if (!best) {
        std::ostringstream msg;
        msg << "no simple cycle of length <= " << constraints.max_cycle_len
            << " satisfies |net rotation| <= eps_theta = " << constraints.eps_theta;
        throw InfeasibleError(msg.str());
    }
    return make_gait(graph, *best, GaitKind::kTranslation, transition_time_s);
}

Gait synthesize_rotation(const GaitGraph& graph, const SynthesisWeights& weights,
                         const SynthesisConstraints& constraints,
                         double transition_time_s)
{
    weights.validate();
    constraints.validate();
    const GraphMatrices mats = matrices(graph);
    const Eigen::RowVectorXd cost_row = weights.alpha_theta * mats.Theta +
                                        weights.beta_theta * mats.Stheta +
                                        weights.gamma_theta * Eigen::RowVectorXd::Ones(graph.edge_count());

    const auto cycles = enumerate_simple_cycles(graph, constraints.max_cycle_len);
    const SimpleCycle* best = nullptr;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& c : cycles) {
        bool feasible = true;
        double cost = 0.0;
        for (int e : c.edges) {
            if (mats.P.col(e).norm() > constraints.eps_p) {
                feasible = false;
                break;
            }
            cost += cost_row(e);
        }
        if (!feasible) {
            continue;
        }
        if (!best || beats(cost, c, best_cost, *best)) {
            best = &c;
            best_cost = cost;
        }
    }
    if (!best) {
        std::ostringstream msg;
        msg << "no simple cycle of length <= " << constraints.max_cycle_len
            << " has every edge displacement ||p_i|| <= eps_p = " << constraints.eps_p;
        throw InfeasibleError(msg.str());
    }
    return make_gait(graph, *best, GaitKind::kRotation, transition_time_s);
}

namespace {

RobotState rotate_limbs(RobotState s, int quarter_turns)
{
    std::uint8_t out = 0;
    for (int k = 0; k < 4; ++k) {
        if (s.limbs & (1u << k)) {
            out = static_cast<std::uint8_t>(out | (1u << ((k + quarter_turns) % 4)));
        }
    }
    return RobotState{out};
}

// One exact quarter turn: (x, y) -> (-y, x); conjugation by a signed
// permutation, so repeated application is bit-exact.
GaitModel rotate_model_quarter(GaitModel m)
{
    const double px = m.twist.px;
    m.twist.px = -m.twist.py;
    m.twist.py = px;

    Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
    r(0, 1) = -1.0;
    r(1, 0) = 1.0;
    r(2, 2) = 1.0;
    m.covariance = (r * m.covariance * r.transpose()).eval();
    return m;
}

}  // namespace

Gait permute_gait(const Gait& gait, int quarter_turns)
{
    const int q = ((quarter_turns % 4) + 4) % 4;
    if (q == 0) {
        return gait;
    }
    for (const auto& s : gait.state_cycle) {
        if (s.limbs > 0x0F) {
            throw std::invalid_argument("permute_gait requires 4-limb states");
        }
    }
    Gait out = gait;
    out.edge_ids.clear();
    for (auto& s : out.state_cycle) {
        s = rotate_limbs(s, q);
    }
    for (int i = 0; i < q; ++i) {
        out.predicted = rotate_model_quarter(out.predicted);
        if (out.measured) {
            out.measured = rotate_model_quarter(*out.measured);
        }
    }
    return out;
}

}  // namespace gaitnav

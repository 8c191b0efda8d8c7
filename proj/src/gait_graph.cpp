#include "gaitnav/gait_graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace gaitnav {

std::string state_to_string(RobotState s, int limb_count)
{
    std::string out(static_cast<std::size_t>(limb_count), '0');
    for (int k = 0; k < limb_count; ++k) {
        // leftmost character is the highest limb index, e.g. "0101" per the
        // four-digit binary convention
        if (s.limbs & (1u << (limb_count - 1 - k))) {
            out[static_cast<std::size_t>(k)] = '1';
        }
    }
    return out;
}

RobotState state_from_string(const std::string& text)
{
    if (text.empty() || text.size() > 8) {
        throw std::invalid_argument("bad state string: '" + text + "'");
    }
    std::uint8_t code = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bad state string: '" + text + "'");
        }
        code = static_cast<std::uint8_t>((code << 1) | (c == '1' ? 1 : 0));
    }
    return RobotState{code};
}

GaitGraph::GaitGraph(int limb_count, std::vector<RobotState> vertices)
    : limb_count_(limb_count),
      vertices_(std::move(vertices)),
      out_edges_(vertices_.size()),
      state_to_index_(256, -1)
{
    if (limb_count_ < 1 || limb_count_ > 8) {
        throw LimbCountOutOfRangeError(limb_count_);
    }
    for (int i = 0; i < vertex_count(); ++i) {
        const auto code = vertices_[static_cast<std::size_t>(i)].limbs;
        if (state_to_index_[code] != -1) {
            throw std::invalid_argument("duplicate vertex state " +
                                        state_to_string(vertices_[static_cast<std::size_t>(i)], limb_count_));
        }
        state_to_index_[code] = i;
    }
}

int GaitGraph::vertex_index(RobotState s) const
{
    const int idx = state_to_index_[s.limbs];
    if (idx < 0) {
        throw UnknownEdgeError("unknown state " + state_to_string(s, limb_count_));
    }
    return idx;
}

std::optional<int> GaitGraph::edge_index(int from, int to) const
{
    for (int e : out_edges_.at(static_cast<std::size_t>(from))) {
        if (edges_[static_cast<std::size_t>(e)].to == to) {
            return e;
        }
    }
    return std::nullopt;
}

int GaitGraph::add_edge(int from, int to, EdgeWeight w)
{
    if (from < 0 || from >= vertex_count() || to < 0 || to >= vertex_count()) {
        throw std::out_of_range("edge endpoint out of range");
    }
    if (from == to) {
        throw std::invalid_argument("self-loops are not allowed");
    }
    if (edge_index(from, to)) {
        throw std::invalid_argument("duplicate edge");
    }
    const int id = edge_count();
    edges_.push_back(GraphEdge{from, to, std::move(w)});
    out_edges_[static_cast<std::size_t>(from)].push_back(id);
    return id;
}

void GaitGraph::set_weight(int edge, EdgeWeight w)
{
    edges_.at(static_cast<std::size_t>(edge)).weight = std::move(w);
}

Eigen::MatrixXd GaitGraph::incidence() const
{
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(vertex_count(), edge_count());
    for (int e = 0; e < edge_count(); ++e) {
        b(edges_[static_cast<std::size_t>(e)].to, e) = 1.0;
        b(edges_[static_cast<std::size_t>(e)].from, e) = -1.0;
    }
    return b;
}

GaitGraph complete_state_graph(int limb_count)
{
    if (limb_count < 1 || limb_count > 8) {
        throw LimbCountOutOfRangeError(limb_count);
    }
    const int n = 1 << limb_count;
    std::vector<RobotState> vertices;
    vertices.reserve(static_cast<std::size_t>(n));
    for (int code = 0; code < n; ++code) {
        vertices.push_back(RobotState{static_cast<std::uint8_t>(code)});
    }
    GaitGraph graph(limb_count, std::move(vertices));
    for (int from = 0; from < n; ++from) {
        for (int to = 0; to < n; ++to) {
            if (from != to) {
                graph.add_edge(from, to);
            }
        }
    }
    return graph;
}

std::vector<int> euler_cycle(const GaitGraph& graph, int start, std::uint64_t seed)
{
    const int n = graph.vertex_count();
    const int m = graph.edge_count();
    if (start < 0 || start >= n) {
        throw std::out_of_range("euler_cycle: start vertex out of range");
    }
    if (m == 0) {
        throw NotEulerianError("graph has no edges");
    }

    std::vector<int> in_deg(static_cast<std::size_t>(n), 0);
    for (const auto& e : graph.edges()) {
        ++in_deg[static_cast<std::size_t>(e.to)];
    }
    for (int v = 0; v < n; ++v) {
        const int out = static_cast<int>(graph.out_edges(v).size());
        if (out != in_deg[static_cast<std::size_t>(v)]) {
            throw NotEulerianError("vertex " + state_to_string(graph.vertices()[static_cast<std::size_t>(v)], graph.limb_count()) +
                                   " has in-degree " + std::to_string(in_deg[static_cast<std::size_t>(v)]) +
                                   " != out-degree " + std::to_string(out));
        }
    }

    // every edge endpoint must be reachable from start
    {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int e : graph.out_edges(v)) {
                const int w = graph.edge(e).to;
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
        for (const auto& e : graph.edges()) {
            if (!seen[static_cast<std::size_t>(e.from)] || !seen[static_cast<std::size_t>(e.to)]) {
                throw DisconnectedError("graph edges are not all reachable from the start vertex");
            }
        }
    }
    if (graph.out_edges(start).empty()) {
        throw DisconnectedError("start vertex has no outgoing edges");
    }

    // Hierholzer with per-vertex successor order shuffled once up front.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        succ[static_cast<std::size_t>(v)] = graph.out_edges(v);
        std::shuffle(succ[static_cast<std::size_t>(v)].begin(), succ[static_cast<std::size_t>(v)].end(), rng);
    }

    std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
    std::vector<int> vertex_stack{start};
    std::vector<int> edge_stack;   // edge taken to reach vertex_stack entry
    std::vector<int> walk;         // reversed edge sequence
    walk.reserve(static_cast<std::size_t>(m));
    while (!vertex_stack.empty()) {
        const int v = vertex_stack.back();
        auto& cursor = next[static_cast<std::size_t>(v)];
        const auto& order = succ[static_cast<std::size_t>(v)];
        if (cursor < order.size()) {
            const int e = order[cursor++];
            vertex_stack.push_back(graph.edge(e).to);
            edge_stack.push_back(e);
        } else {
            vertex_stack.pop_back();
            if (!edge_stack.empty()) {
                walk.push_back(edge_stack.back());
                edge_stack.pop_back();
            }
        }
    }
    std::reverse(walk.begin(), walk.end());
    if (static_cast<int>(walk.size()) != m) {
        throw DisconnectedError("euler traversal did not cover every edge");
    }
    return walk;
}

GaitGraph estimate_weights(const GaitGraph& graph, const TrialLog& trials, bool allow_partial)
{
    const int m = graph.edge_count();
    std::vector<std::vector<Eigen::Vector3d>> samples(static_cast<std::size_t>(m));
    for (const auto& rec : trials) {
        const int from = graph.vertex_index(rec.from);
        const int to = graph.vertex_index(rec.to);
        const auto e = graph.edge_index(from, to);
        if (!e) {
            throw UnknownEdgeError("trial log references missing edge " +
                                   state_to_string(rec.from, graph.limb_count()) + " -> " +
                                   state_to_string(rec.to, graph.limb_count()));
        }
        samples[static_cast<std::size_t>(*e)].push_back(rec.displacement);
    }

    std::vector<int> uncovered;
    for (int e = 0; e < m; ++e) {
        if (samples[static_cast<std::size_t>(e)].empty()) {
            uncovered.push_back(e);
        }
    }
    if (!uncovered.empty() && !allow_partial) {
        std::ostringstream msg;
        msg << uncovered.size() << " edge(s) have no samples:";
        for (std::size_t i = 0; i < uncovered.size() && i < 8; ++i) {
            const auto& e = graph.edge(uncovered[i]);
            msg << ' ' << state_to_string(graph.vertices()[static_cast<std::size_t>(e.from)], graph.limb_count())
                << "->" << state_to_string(graph.vertices()[static_cast<std::size_t>(e.to)], graph.limb_count());
        }
        if (uncovered.size() > 8) {
            msg << " ...";
        }
        throw MissingEdgeDataError(msg.str(), uncovered);
    }

    GaitGraph out(graph.limb_count(), graph.vertices());
    for (int e = 0; e < m; ++e) {
        const auto& obs = samples[static_cast<std::size_t>(e)];
        if (obs.empty()) {
            continue;  // allow_partial: drop the edge
        }
        const int k = static_cast<int>(obs.size());
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& x : obs) {
            mean += x;
        }
        mean /= static_cast<double>(k);
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        if (k > 1) {
            for (const auto& x : obs) {
                const Eigen::Vector3d d = x - mean;
                cov += d * d.transpose();
            }
            cov /= static_cast<double>(k - 1);
        }
        out.add_edge(graph.edge(e).from, graph.edge(e).to, EdgeWeight{mean, cov, k});
    }
    return out;
}

GraphMatrices matrices(const GaitGraph& graph)
{
    const int m = graph.edge_count();
    GraphMatrices out;
    out.P.resize(2, m);
    out.Theta.resize(m);
    out.Sp.resize(m);
    out.Stheta.resize(m);
    for (int e = 0; e < m; ++e) {
        const auto& w = graph.edge(e).weight;
        if (w.sample_count < 1) {
            throw UnestimatedEdgeError("edge " + std::to_string(e) + " has no estimated weight");
        }
        out.P.col(e) = w.mean.head<2>();
        out.Theta(e) = w.mean(2);
        out.Sp(e) = w.covariance.topLeftCorner<2, 2>().trace();
        out.Stheta(e) = w.covariance(2, 2);
    }
    return out;
}

}  // namespace gaitnav

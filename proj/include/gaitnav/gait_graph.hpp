#pragma once

#include "gaitnav/se2.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaitnav {

// One actuation posture: bit k set = limb k actuated.
struct RobotState {
    std::uint8_t limbs = 0;

    bool operator==(const RobotState& o) const { return limbs == o.limbs; }
    auto operator<=>(const RobotState& o) const { return limbs <=> o.limbs; }
};

std::string state_to_string(RobotState s, int limb_count);
RobotState state_from_string(const std::string& text);

// Displacement distribution of one motion primitive, measured in the
// frame of the edge's initial vertex. mean = (px, py, theta).
struct EdgeWeight {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    int sample_count = 0;
};

struct GraphEdge {
    int from = 0;
    int to = 0;
    EdgeWeight weight;
};

struct LimbCountOutOfRangeError : std::invalid_argument {
    explicit LimbCountOutOfRangeError(int n)
        : std::invalid_argument("limb count " + std::to_string(n) + " outside [1, 8]") {}
};

struct UnknownEdgeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotEulerianError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DisconnectedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MissingEdgeDataError : std::invalid_argument {
    std::vector<int> uncovered_edges;
    MissingEdgeDataError(std::string msg, std::vector<int> edges)
        : std::invalid_argument(std::move(msg)), uncovered_edges(std::move(edges)) {}
};

struct UnestimatedEdgeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Digraph of robot states and motion primitives. No self-loops, at most
// one edge per ordered vertex pair.
class GaitGraph {
public:
    GaitGraph(int limb_count, std::vector<RobotState> vertices);

    int limb_count() const { return limb_count_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<RobotState>& vertices() const { return vertices_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const GraphEdge& edge(int i) const { return edges_.at(i); }

    int vertex_index(RobotState s) const;  // throws if unknown
    std::optional<int> edge_index(int from, int to) const;
    const std::vector<int>& out_edges(int vertex) const { return out_edges_.at(vertex); }

    int add_edge(int from, int to, EdgeWeight w = {});
    void set_weight(int edge, EdgeWeight w);

    // n x m signed matrix: +1 at the head (to), -1 at the tail (from).
    Eigen::MatrixXd incidence() const;

private:
    int limb_count_;
    std::vector<RobotState> vertices_;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<int> state_to_index_;  // 256 slots, -1 = absent
};

// Graph over all 2^limb_count states with every ordered-pair edge,
// weights unset (sample_count = 0).
GaitGraph complete_state_graph(int limb_count);

// Closed walk traversing every edge exactly once from `start`, as a
// sequence of edge indices. Successor choice among unused out-edges is
// randomized by `seed` (Hierholzer).
std::vector<int> euler_cycle(const GaitGraph& graph, int start, std::uint64_t seed);

struct TrialSample {
    int trial = 0;
    int step = 0;
    RobotState from;
    RobotState to;
    Eigen::Vector3d displacement = Eigen::Vector3d::Zero();  // dx, dy, dtheta
};

using TrialLog = std::vector<TrialSample>;

// Per-edge sample mean and unbiased sample covariance from trial records.
// Single-sample edges get zero covariance. Strict mode raises
// MissingEdgeDataError when any edge has no samples; with
// allow_partial = true, uncovered edges are dropped from the result.
GaitGraph estimate_weights(const GaitGraph& graph, const TrialLog& trials,
                           bool allow_partial = false);

// Columns correspond to edges in index order.
struct GraphMatrices {
    Eigen::Matrix2Xd P;         // mean displacements
    Eigen::RowVectorXd Theta;   // mean rotations
    Eigen::RowVectorXd Sp;      // tr(Sigma_pp)
    Eigen::RowVectorXd Stheta;  // Sigma_thetatheta
};

GraphMatrices matrices(const GaitGraph& graph);

}  // namespace gaitnav

#pragma once

#include "gaitnav/gait_graph.hpp"
#include "gaitnav/se2.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace gaitnav {

// Linear weights of the translation / rotation gait cost rows.
struct SynthesisWeights {
    Eigen::Vector2d alpha_t{-1.0, 0.0};  // -d maximizes displacement along d
    double beta_t = 1.0;
    double gamma_t = 0.1;
    double alpha_theta = -1.0;
    double beta_theta = 1.0;
    double gamma_theta = 0.1;

    void validate() const;  // finite, gamma terms >= 0
};

struct SynthesisConstraints {
    double eps_theta = 0.05;  // net-rotation bound for translation gaits
    double eps_p = 0.1;       // per-edge displacement bound for rotation gaits
    int max_cycle_len = 6;

    void validate() const;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A simple cycle of motion primitives plus its per-cycle motion model.
// The state cycle is the source of truth; edge ids are a cache bound to
// a particular graph (empty when unbound, e.g. after permutation).
struct Gait {
    std::string id;
    GaitKind kind = GaitKind::kTranslation;
    std::vector<RobotState> state_cycle;  // visiting order; closes back to front()
    std::vector<int> edge_ids;            // cached, graph-relative; may be empty
    GaitModel predicted;
    std::optional<GaitModel> measured;

    int length() const { return static_cast<int>(state_cycle.size()); }
    // Measured model takes precedence over the predicted one when present.
    const GaitModel& model() const { return measured ? *measured : predicted; }
};

// Edge ids of the gait's state cycle in `graph`; throws UnknownEdgeError
// if a transition has no edge there.
std::vector<int> gait_edge_ids(const Gait& gait, const GaitGraph& graph);

// m-length binary indicator z of the gait's edges in `graph`.
Eigen::VectorXd gait_indicator(const Gait& gait, const GaitGraph& graph);

// Re-derive the edge id cache against `graph`.
Gait rebind_gait(Gait gait, const GaitGraph& graph);

struct SimpleCycle {
    std::vector<int> vertices;  // canonical: starts at the smallest vertex label
    std::vector<int> edges;
};

// All directed simple cycles with 2 <= length <= max_len, each reported
// once with canonical start = smallest vertex label, in deterministic
// (start, DFS) order.
std::vector<SimpleCycle> enumerate_simple_cycles(const GaitGraph& graph, int max_len);

// Cheapest simple cycle under J_t subject to |Theta z| <= eps_theta.
// Ties: fewer edges, then lexicographic canonical vertex sequence.
Gait synthesize_translation(const GaitGraph& graph, const SynthesisWeights& weights,
                            const SynthesisConstraints& constraints,
                            double transition_time_s = 0.45);

// Cheapest simple cycle under J_theta subject to ||p_i|| <= eps_p for
// every selected edge.
Gait synthesize_rotation(const GaitGraph& graph, const SynthesisWeights& weights,
                         const SynthesisConstraints& constraints,
                         double transition_time_s = 0.45);

// Limb-symmetry permutation of a 4-limb gait: every state's limb bits
// cyclically rotated by quarter_turns, the model translation rotated by
// quarter_turns * 90 degrees (exactly; no trig), omega unchanged,
// covariance conjugated by the same rotation. quarter_turns = 0 returns
// the input unchanged; otherwise the edge id cache is cleared.
Gait permute_gait(const Gait& gait, int quarter_turns);

}  // namespace gaitnav

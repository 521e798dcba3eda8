#pragma once
// Top tier: contact-state enumeration, graph construction, Dijkstra over
// states, and object-pose path assembly.

#include <optional>
#include <string>
#include <vector>

#include "ldhp/primitives.hpp"
#include "ldhp/scene.hpp"

namespace ldhp {

struct TopTierFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoContactReachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StateKind { VertexEdge, EdgeEdge };

struct ContactState {
  StateKind kind = StateKind::VertexEdge;
  int obj_feature = -1;  // vertex index or edge index
  int env_edge = -1;
  std::string label;     // "v2e1" / "l1e1", 1-indexed like the task write-ups
  Pose2 witness;
  int side = +1;         // witness side of the env edge
};

enum class GraphEdgeKind { Tip, PushLoop, Biplanar, Air };

struct GraphEdge {
  int from = -1, to = -1;
  GraphEdgeKind kind = GraphEdgeKind::Tip;
  double weight = 1.0;
  // Tip metadata.
  int pivot_vertex = -1;
  // Biplanar metadata: vertex sliding on env edge p, object edge riding the
  // structure around adjacent env edge q.
  int bp_vertex = -1, bp_obj_edge = -1, bp_env_p = -1, bp_env_q = -1;
};

struct ContactGraph {
  std::vector<ContactState> nodes;
  std::vector<GraphEdge> edges;

  int find_state(StateKind kind, int obj_feature, int env_edge) const;
};

struct PosePath {
  std::vector<Pose2> poses;                    // T_0 .. T_n
  std::vector<PrimitiveInstance> moves;        // n moves
  std::vector<std::string> labels;             // state label per pose ("" = air)
  int attempt = 0;
  std::vector<int> state_sequence;             // node ids of the sigma path

  int segments() const { return static_cast<int>(moves.size()); }
};

// Translate along +-x / +-y (shortest first-contact distance) until contact.
Pose2 nearest_contact_pose(const Pose2& t, const Scene& scene,
                           const PlannerConfig& cfg);

std::vector<ContactState> enumerate_contact_states(const Scene& scene,
                                                   const PlannerConfig& cfg);

ContactGraph build_contact_graph(const Scene& scene, const PlannerConfig& cfg);

// Dijkstra with deterministic tie-breaking; self-loops and disabled kinds are
// skipped. Returns node ids from `src` to `dst`.
std::optional<std::vector<int>> shortest_state_path(const ContactGraph& g, int src,
                                                    int dst,
                                                    const std::vector<int>& skip_edges);

// Attempt-indexed pose-path proposal (k-th shortest sigma path via single-edge
// exclusion, times a small set of terminal-transition variants).
PosePath plan_pose_path(const Scene& scene, const PlannerConfig& cfg, int attempt);

// The contact state a pose belongs to (primary contact), if any.
std::optional<int> classify_pose_state(const ContactGraph& g, const Scene& scene,
                                       const PlannerConfig& cfg, const Pose2& t);

std::string contact_graph_to_json(const ContactGraph& g);

}  // namespace ldhp

#pragma once
// Bottom tier: pose-conditioned and motion-conditioned grasp sets, the layered
// grasp graph, intra-pose AdjustGrasp routing, and the shortest grasp plan.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ldhp/contact_graph.hpp"
#include "ldhp/grasp.hpp"
#include "ldhp/primitives.hpp"

namespace ldhp {

// Session-scoped caches so dichotomy refinement only recomputes the sets
// touched by new poses/segments.
struct IntraRoute {
  std::vector<PrimitiveInstance> seq;
  std::vector<Grasp> states;  // grasp after each primitive
  double travel = 0.0;        // mm
  double cost = 0.0;
};

struct GraspCache {
  std::vector<Grasp> all;  // enumerate_grasps output
  std::map<std::pair<int64_t, int64_t>, std::vector<int>> pose_sets;  // G_T ids
  struct SegmentData {
    std::vector<int> feasible;             // grasp ids admissible for the move
    std::vector<double> cost;              // S_g(m) per feasible entry
    std::vector<QualityResult> quality;
  };
  std::map<std::string, SegmentData> segments;  // keyed by move signature
  // Reachable-grasp sets for intra-pose routing, keyed by pose/grasp/exempt.
  struct ReachKey {
    std::pair<int64_t, int64_t> pose;
    GraspKey g;
    bool exempt;
    bool operator<(const ReachKey& o) const {
      if (pose != o.pose) return pose < o.pose;
      if (!(g == o.g)) return g < o.g;
      return exempt < o.exempt;
    }
  };
  std::map<ReachKey, std::vector<IntraRoute>> reach;
};

std::vector<int> pose_conditioned(const Scene& scene, const PlannerConfig& cfg,
                                  GraspCache& cache, const Pose2& t);

// Indices into cache.all of grasps feasible along m from t (must also be in
// both endpoint pose sets).
const GraspCache::SegmentData& motion_conditioned(const Scene& scene,
                                                  const PlannerConfig& cfg,
                                                  GraspCache& cache,
                                                  const PrimitiveInstance& m,
                                                  const Pose2& t);

// Collision- and rest-gated AdjustGrasp route between two grasps at pose t
// (bounded search; the open -> approach-contact route is always attempted).
std::optional<IntraRoute> intra_route(const Scene& scene, const PlannerConfig& cfg,
                                      GraspCache& cache, const Grasp& from,
                                      const Grasp& to, const Pose2& t,
                                      bool boundary_exempt);

struct GraspPlan {
  std::vector<Grasp> seg_grasp;                // grasp riding each segment
  std::vector<std::vector<IntraRoute>> intra;  // ordered regrasp routes per layer
  double cost = 0.0;
};

struct BottomTierResult {
  bool ok = false;
  GraspPlan plan;
  int fail_segment = -1;      // k*: first empty or unreachable segment
  std::string fail_reason;
  std::vector<int> gt_sizes;  // |G_T| per layer
  std::vector<int> gm_sizes;  // |G_m| per segment
  int64_t node_count = 0;     // sum |G_T| + 2 virtual
};

using InterReweight = std::function<double(const Grasp&, int segment)>;

BottomTierResult plan_grasps(const Scene& scene, const PlannerConfig& cfg,
                             GraspCache& cache, const PosePath& path,
                             const InterReweight& reweight = {});

std::string grasp_graph_to_json(const Scene& scene, const PlannerConfig& cfg,
                                GraspCache& cache, const PosePath& path,
                                const BottomTierResult& result);

}  // namespace ldhp

#pragma once
// Orchestration of the two-tier search with dichotomy refinement and
// backtracking, plus the independent plan verifier and the ablation entry.

#include <optional>
#include <string>
#include <vector>

#include "ldhp/contact_graph.hpp"
#include "ldhp/grasp_graph.hpp"

namespace ldhp {

enum class StepKind { MoveStep, AdjustStep };

struct PlanStep {
  StepKind kind = StepKind::MoveStep;
  PrimitiveInstance primitive;
  Pose2 start_pose, end_pose;
  Grasp grasp_before, grasp_after;
  std::string label_before, label_after;
};

struct PlanStats {
  int attempts = 0;
  int refinements = 0;
  int contact_nodes = 0;
  int contact_edges = 0;
  int64_t grasp_nodes = 0;
  std::vector<int> gt_sizes;
  std::vector<int> gm_sizes;
  double wall_time_s = 0.0;
};

struct Plan {
  std::vector<PlanStep> steps;
  double total_cost = 0.0;
  PlanStats stats;
  uint64_t scene_digest = 0;
};

struct AttemptDiagnostic {
  int attempt = 0;
  std::string stage;   // "top" or "bottom"
  std::string reason;
  int fail_segment = -1;
  std::string fail_kind;
};

struct PlanFailure {
  std::vector<AttemptDiagnostic> attempts;
};

struct PlanOutcome {
  std::optional<Plan> plan;
  PlanFailure failure;
  bool ok() const { return plan.has_value(); }
};

PlanOutcome ldhp_plan(const Scene& scene, const PlannerConfig& cfg,
                      const InterReweight& reweight = {});

struct VerifyViolation {
  int step = -1;
  int sample = -1;
  std::string rule;
};

struct VerificationReport {
  std::vector<VerifyViolation> violations;
  bool clean() const { return violations.empty(); }
};

// Independent re-check at doubled discretization: chain continuity, collision,
// contact modes, equilibrium, and rest stability at no-contact dwells.
VerificationReport verify_plan(const Plan& plan, const Scene& scene,
                               const PlannerConfig& cfg);

PlanOutcome ablate(const Scene& scene, const PlannerConfig& cfg,
                   const std::string& removed_kind);

std::string plan_to_json(const Plan& plan);
std::string failure_to_json(const PlanFailure& f);
Plan plan_from_json(const std::string& text);

}  // namespace ldhp

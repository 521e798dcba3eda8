#pragma once
// Typed primitive library: MoveObject (tip, push, biplanar-slide, air-move)
// and AdjustGrasp (open, close, pivot, slide, flip, approach-contact), with
// state transformers, discretization, per-instance feasibility and bisection.

#include <stdexcept>
#include <string>
#include <vector>

#include "ldhp/grasp.hpp"
#include "ldhp/mechanics.hpp"
#include "ldhp/scene.hpp"

namespace ldhp {

enum class PrimitiveKind {
  Tip, Push, BiplanarSlide, AirMove,
  Open, Close, Pivot, Slide, Flip, ApproachContact,
};

const char* primitive_kind_name(PrimitiveKind k);
PrimitiveKind primitive_kind_from_name(const std::string& name);
bool is_move_kind(PrimitiveKind k);
bool is_adjust_kind(PrimitiveKind k);

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotBisectable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TipParams {
  Vec2 pivot;        // world pivot point
  double angle = 0;  // signed rotation
  int obj_vertex = -1;
  int env_edge = -1;
};
struct PushParams {
  int env_edge = -1;
  double travel = 0;  // signed along the env edge direction
  int obj_edge = -1;
};
struct BiplanarParams {
  int obj_vertex = -1;  // slides on env edge p
  int env_edge_p = -1;
  int obj_edge = -1;    // rides the structure around env edge q
  int env_edge_q = -1;
  double theta_start = 0;  // absolute object orientations
  double theta_end = 0;
};
struct AirParams {
  std::vector<Pose2> waypoints;  // includes start and end
};
struct OpenParams { double dw = 40.0; };
struct CloseParams { double dw = 0.0; };
struct PivotParams { int finger = 0; double angle = 0.0; };
struct SlideParams { int finger = -1; double darc = 0.0; };  // -1: both fingers
struct FlipParams { int sense = +1; };
struct ApproachParams { Grasp target; double standoff = 40.0; };

struct PrimitiveInstance {
  PrimitiveKind kind = PrimitiveKind::Tip;
  TipParams tip;
  PushParams push;
  BiplanarParams biplanar;
  AirParams air;
  OpenParams open;
  CloseParams close;
  PivotParams pivot;
  SlideParams slide;
  FlipParams flip;
  ApproachParams approach;

  static PrimitiveInstance make_tip(Vec2 pivot, double angle, int obj_vertex,
                                    int env_edge);
  static PrimitiveInstance make_push(int env_edge, double travel, int obj_edge);
  static PrimitiveInstance make_air(std::vector<Pose2> waypoints);
};

// Biplanar-slide closed form: object orientation determines the pose through
// the two contact constraints. Throws DegenerateGeometry if inconsistent.
Pose2 biplanar_pose_at(const BiplanarParams& p, const Scene& scene, double theta);

Pose2 apply_move(const PrimitiveInstance& m, const Pose2& t, const Scene& scene);
std::vector<Pose2> discretize_move(const PrimitiveInstance& m, const Pose2& t,
                                   const Scene& scene, int j_steps);
PrimitiveInstance reverse_move(const PrimitiveInstance& m, const Pose2& t,
                               const Scene& scene);
std::pair<PrimitiveInstance, PrimitiveInstance> bisect_move(const PrimitiveInstance& m);

Grasp apply_adjust(const PrimitiveInstance& a, const Grasp& g, const Pose2& t,
                   const Scene& scene, const PlannerConfig& cfg);

struct FeasibilityReport {
  bool feasible = false;
  int fail_sample = -1;
  std::string reason;
  // Per-sample grasp reactions from the equilibrium certificates (MoveObject
  // checks only; empty entries for samples without a grasp).
  std::vector<QualityInput> samples;
};

// Full three-part feasibility of a MoveObject instance from pose t: per-sample
// collision checks, contact-mode consistency with the primitive's required
// modes, and mode-consistent quasi-static equilibrium including the grasp.
FeasibilityReport move_feasible(const PrimitiveInstance& m, const Pose2& t,
                                const Scene& scene, const Grasp* grasp,
                                const PlannerConfig& cfg);

// Feasibility of an AdjustGrasp instance at fixed pose t, from grasp g.
// `object_must_rest` disables the rest-equilibrium requirement for exempt
// boundary layers (externally staged states).
FeasibilityReport adjust_feasible(const PrimitiveInstance& a, const Grasp& g,
                                  const Pose2& t, const Scene& scene,
                                  const PlannerConfig& cfg,
                                  bool object_must_rest = true);

// Fingertip travel of an adjust primitive (sum over both fingers, mm).
double adjust_travel(const PrimitiveInstance& a, const Grasp& g, const Pose2& t,
                     const Scene& scene);

// Environment-only static equilibrium at a pose (rest stability).
bool rests_stably(const Scene& scene, const Pose2& t, const PlannerConfig& cfg);

// Mode-consistent equilibrium at one pose with optional grasp; exposed for the
// independent plan verifier.
bool static_equilibrium_with_grasp(const Scene& scene, const Pose2& t,
                                   const Grasp* grasp, const PlannerConfig& cfg);

}  // namespace ldhp

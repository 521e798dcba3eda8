#pragma once
// Input tuple for the planner: object polygon, environment polyline, gripper
// model, start/goal poses, friction map, plus the planner configuration.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldhp/geometry.hpp"

namespace ldhp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PolygonModel {
  std::vector<Vec2> vertices;  // CCW, object frame
  Vec2 com;                    // object frame, strictly interior
  double mass_scale = 1.0;     // gravity wrench magnitude

  int num_edges() const { return static_cast<int>(vertices.size()); }
  Segment edge(int i) const {
    int n = num_edges();
    return {vertices[i % n], vertices[(i + 1) % n]};
  }
  // Outward normal of edge i (polygon is CCW, interior is left of the edge).
  Vec2 edge_outward(int i) const { return -perp(edge(i).dir()); }
  double bbox_diag() const { return bounds_of(vertices).diag(); }
};

struct EnvBoundary {
  std::vector<Vec2> vertices;  // open polyline, world frame

  int num_edges() const { return static_cast<int>(vertices.size()) - 1; }
  Segment edge(int j) const { return {vertices[j], vertices[j + 1]}; }
  Vec2 edge_normal(int j) const { return perp(edge(j).dir()); }  // one of two sides
};

enum class GripperVariant { ConfigI, ConfigII };

struct GripperModel {
  GripperVariant variant = GripperVariant::ConfigI;
  // Config I: cylindrical fingers at fixed spacing.
  double finger_radius = 5.0;
  double finger_spacing = 80.0;
  // Config II: cuboid fingertips, actuated opening.
  double pad_width = 10.0;   // thickness away from the contacted face
  double pad_length = 30.0;  // extent along the finger axis
  double opening_min = 0.0;
  double opening_max = 0.0;
  // Shared: finger length used for shank collision checks & sweep radii.
  double shank_length = 35.0;
};

struct FrictionMap {
  double mu_env = 0.5;
  double mu_grip = 0.5;
  std::map<int, double> overrides;  // env edge index -> mu

  double env_mu(int edge) const {
    auto it = overrides.find(edge);
    return it == overrides.end() ? mu_env : it->second;
  }
};

struct Scene {
  PolygonModel object;
  EnvBoundary env;
  GripperModel gripper;
  Pose2 t0, tg;
  FrictionMap friction;
  Vec2 gravity_dir{0.0, -1.0};
  std::string name;

  Vec2 gravity_force() const { return gravity_dir * object.mass_scale; }
  double char_length() const { return object.bbox_diag(); }
};

struct PlannerConfig {
  int k_samples = 100;       // contact samples per object edge
  int j_steps = 20;          // motion discretization
  int h_max = 10;            // outer (top tier) attempts
  int l_max = 5;             // refinements per segment
  double w1 = 1.0, w2 = 1.0;           // grasp quality weights
  double lambda1 = 1.0, lambda2 = 1.0; // intra-pose cost weights
  double contact_eps = 0.5;  // mm
  double angle_eps = 1e-3;   // rad
  uint64_t seed = 0;
  std::set<std::string> disabled_primitives;
  int top_tier_samples = 8;

  bool disabled(const std::string& kind) const {
    return disabled_primitives.count(kind) > 0;
  }

  // Contact re-seating tolerance: grasp landings within one boundary sample
  // of a grid grasp seat onto it (fingertips have finite pads).
  double seat_tol(const PolygonModel& object) const {
    double longest = 0;
    for (int i = 0; i < object.num_edges(); ++i)
      longest = std::max(longest, object.edge(i).length());
    return std::max(contact_eps, longest / k_samples);
  }
};

struct Violation {
  std::string field;
  std::string rule;
};

std::vector<Violation> validate_scene(const Scene& scene,
                                      double contact_eps = 0.5);

Scene load_scene(const std::string& path);
Scene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const Scene& scene);
void save_scene(const Scene& scene, const std::string& path);

PlannerConfig config_from_json_text(const std::string& text);
PlannerConfig load_config(const std::string& path);

// FNV-1a digest of the canonical scene JSON; embedded in plans so renders can
// refuse mismatched scene/plan pairs.
uint64_t scene_digest(const Scene& scene);

}  // namespace ldhp

#pragma once
// Scene-level collision and contact queries.

#include <vector>

#include "ldhp/geometry.hpp"
#include "ldhp/scene.hpp"

namespace ldhp {

// True iff an env segment penetrates the object interior deeper than eps or an
// env vertex lies inside beyond eps. Touching within eps is not a collision.
bool collides(const PolygonModel& object, const Pose2& pose,
              const EnvBoundary& env, double eps);

// Elementary object/environment contacts at the given pose, deduplicated:
// a flush edge-edge contact is reported once with its overlap endpoints.
// Normals point from the environment into the object.
std::vector<Contact> detect_contacts(const PolygonModel& object, const Pose2& pose,
                                     const EnvBoundary& env, double eps,
                                     double angle_eps = 1e-3);

// Point on object edge `edge` at arc parameter s in [0,1] (object frame).
Vec2 boundary_point(const PolygonModel& object, int edge, double s);

// A finger body in the world frame: either a capsule (Config I cylindrical
// finger seen in the plane) or an oriented box (Config II cuboid fingertip).
struct FingerShape {
  enum class Type { Capsule, Box } type = Type::Capsule;
  // Capsule: segment seg with radius r.
  Segment seg;
  double radius = 0.0;
  // Box: center, half extents, axis (unit) of the "u" half extent.
  Vec2 center;
  Vec2 axis_u;  // unit
  double half_u = 0.0, half_v = 0.0;

  std::vector<Vec2> box_corners() const;
};

// Penetration depth of a finger shape into the object polygon at `pose`.
double finger_object_penetration(const FingerShape& f, const PolygonModel& object,
                                 const Pose2& pose);
// Penetration of a finger into the environment. Segments the object rests on
// (within `support_prox` of the object boundary) are treated as locally solid
// on the side away from `com_w`: a finger reaching beyond such a segment is
// penetrating even if it only grazes the curve.
double finger_env_penetration(const FingerShape& f, const EnvBoundary& env,
                              const std::vector<Vec2>& obj_poly_world,
                              const Vec2& com_w, double support_prox);

// Spec-level convenience: does a gripper with both fingertips placed at the
// two world contact points (with the shapes synthesized for the given family)
// collide with object or environment beyond eps?
bool fingers_collide(const std::vector<FingerShape>& fingers,
                     const PolygonModel& object, const Pose2& obj_pose,
                     const EnvBoundary& env, double eps);

}  // namespace ldhp

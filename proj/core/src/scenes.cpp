#include "ldhp/scenes.hpp"

#include <cmath>
#include <stdexcept>

namespace ldhp {

namespace {

PolygonModel rect_object() {
  PolygonModel o;
  o.vertices = {{0, 0}, {150, 0}, {150, 70}, {0, 70}};
  o.com = {75, 35};
  o.mass_scale = 1.0;
  return o;
}

Pose2 rotated_about(const Pose2& t, const Vec2& pivot, double ang) {
  Vec2 rel = t.translation() - pivot;
  Vec2 moved = rotated(rel, ang) + pivot;
  return Pose2(moved.x, moved.y, t.theta + ang);
}

}  // namespace

Scene make_task1_scene() {
  Scene s;
  s.name = "task1";
  s.object = rect_object();
  s.env.vertices = {{-400, 0}, {600, 0}};
  s.gripper.variant = GripperVariant::ConfigI;
  s.gripper.finger_radius = 5.0;
  s.gripper.finger_spacing = 80.0;
  s.gripper.shank_length = 35.0;
  s.friction.mu_env = 0.2;
  s.friction.mu_grip = 0.2;
  // Start flat on the table; goal held in the air at a modest tilt so a
  // two-point pinch at fixed 80 mm spacing can carry it.
  s.t0 = Pose2(40, 0, 0);
  Vec2 pivot{40 + 150, 0};  // object vertex v2 at t0
  double tilt = -25.0 * kPi / 180.0;
  Pose2 tipped = rotated_about(s.t0, pivot, tilt);
  s.tg = Pose2(tipped.x, tipped.y + 60.0, tipped.theta);
  return s;
}

Scene make_task2_scene() {
  Scene s;
  s.name = "task2";
  s.object = rect_object();
  // 300 x 75 slot between two table surfaces.
  s.env.vertices = {{-150, 75}, {0, 75}, {0, 0}, {300, 0}, {300, 75}, {450, 75}};
  s.gripper.variant = GripperVariant::ConfigII;
  s.gripper.pad_width = 10.0;
  s.gripper.pad_length = 30.0;
  s.gripper.opening_min = 20.0;
  s.gripper.opening_max = 85.0;
  s.gripper.shank_length = 25.0;
  s.friction.mu_env = 0.03;
  s.friction.mu_grip = 0.6;
  // Start held above the slot, slightly off vertical; goal lying in the slot
  // against the right wall (the final laid-down pose of the wall-guided
  // slide, still held).
  Pose2 stand(100, 0, kPi / 2);  // vertex v1 at (100, 0), flush on the floor
  Pose2 t0 = rotated_about(stand, Vec2{100, 0}, -5.0 * kPi / 180.0);
  s.t0 = Pose2(t0.x, t0.y + 120.0, t0.theta);
  double theta_end = 5.0 * kPi / 180.0;
  double x1 = 300.0 - 150.0 * std::cos(theta_end);
  s.tg = Pose2(x1, 0, theta_end);
  return s;
}

Scene make_task1_inverse_scene() {
  Scene s = make_task1_scene();
  std::swap(s.t0, s.tg);
  s.name = "task1-inverse";
  return s;
}

Scene make_task2_inverse_scene() {
  Scene s = make_task2_scene();
  std::swap(s.t0, s.tg);
  s.name = "task2-inverse";
  return s;
}

Scene bundled_scene(const std::string& name) {
  if (name == "task1") return make_task1_scene();
  if (name == "task2") return make_task2_scene();
  if (name == "task1-inverse") return make_task1_inverse_scene();
  if (name == "task2-inverse") return make_task2_inverse_scene();
  throw std::invalid_argument("unknown bundled scene: " + name);
}

}  // namespace ldhp

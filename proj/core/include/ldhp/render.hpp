#pragma once
// SVG frame rendering of planned trajectories.

#include <string>

#include "ldhp/planner.hpp"

namespace ldhp {

struct RenderSpec {
  std::string out_dir;
  int stride = 1;
  int canvas_w = 800, canvas_h = 500;
  double scale = 1.0;  // mm -> px; <= 0 means auto-fit
  bool layer_object = true;
  bool layer_env = true;
  bool layer_gripper = true;
  bool layer_contacts = true;
  bool layer_com = true;
  bool layer_cones = false;
  int move_samples = 20;    // frames per MoveStep
  int adjust_samples = 8;   // frames per AdjustStep
};

// Renders zero-padded frame_%04d.svg files; returns the frame count.
int render_plan(const Plan& plan, const Scene& scene, const PlannerConfig& cfg,
                const RenderSpec& spec);

}  // namespace ldhp

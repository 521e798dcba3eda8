#pragma once
// Bundled benchmark scenes: table-edge lifting with a fixed-opening gripper
// (task1) and slot insertion with actuated cuboid fingertips (task2), plus
// their start/goal-swapped inverses.

#include <string>

#include "ldhp/scene.hpp"

namespace ldhp {

Scene make_task1_scene();
Scene make_task2_scene();
Scene make_task1_inverse_scene();
Scene make_task2_inverse_scene();

// Returns the named bundled scene ("task1", "task2", "task1-inverse",
// "task2-inverse"); throws std::invalid_argument otherwise.
Scene bundled_scene(const std::string& name);

}  // namespace ldhp

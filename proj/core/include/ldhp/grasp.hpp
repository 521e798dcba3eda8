#pragma once
// Fingertip contact pairs on the object boundary, the no-contact symbol, and
// their realization as world-frame finger bodies.
//
// Two pair families are modeled:
//   Pinch: contacts on two anti-parallel object edges, fingers opposing.
//   Press: both fingertips on the same edge, pushing along its inward normal.
// `sigma` encodes the finger/carriage axis side (the shank direction is
// sigma * perp(contact pair axis) for a pinch); Flip negates it. Pads are
// symmetric about the contact in-plane, so sigma matters through pivot
// landings, press validity and approach/retract paths.

#include <optional>
#include <string>
#include <vector>

#include "ldhp/contact.hpp"
#include "ldhp/mechanics.hpp"
#include "ldhp/scene.hpp"

namespace ldhp {

struct GraspContact {
  int edge = -1;
  double s = 0.0;  // arc parameter in [0,1]
};

enum class GraspFamily { NoContact, Pinch, Press };

struct Grasp {
  GraspFamily family = GraspFamily::NoContact;
  GraspContact a, b;
  int sigma = +1;

  bool is_pair() const { return family != GraspFamily::NoContact; }
  static Grasp none() { return Grasp{}; }
};

// Canonical ordering key so grasps can live in ordered containers.
struct GraspKey {
  int family;
  int ea, eb;
  int64_t sa, sb;  // quantized arcs
  int sigma;
  bool operator<(const GraspKey& o) const;
  bool operator==(const GraspKey& o) const;
};
GraspKey grasp_key(const Grasp& g);
Grasp canonical(const Grasp& g);

// Same family/edges/side with contact points within tol_mm of each other.
bool grasps_match(const Grasp& a, const Grasp& b, const PolygonModel& object,
                  double tol_mm);

std::string grasp_label(const Grasp& g);

// World-frame realization of a pair grasp at an object pose.
struct GraspRealization {
  Vec2 pa, pb;          // contact points
  Vec2 na, nb;          // face outward normals at the contacts
  Vec2 shank;           // unit finger axis direction (toward the carriage)
  Vec2 center;          // midpoint of the contacts
  double opening = 0.0; // pinch: contact separation; press: contact spacing
  std::vector<FingerShape> fingers;
  int finger_split = 1;  // fingers[0..split) belong to contact a, rest to b
  // Grasp contacts as mechanics contacts (normal points finger -> object).
  std::vector<Contact> contacts;
};

GraspRealization realize(const Grasp& g, const PolygonModel& object,
                         const GripperModel& gripper, const Pose2& pose);

// Family/opening admissibility in the object frame (no collision checks).
bool grasp_admissible(const Grasp& g, const PolygonModel& object,
                      const GripperModel& gripper, double contact_eps,
                      double angle_eps);

// All admissible pair grasps over the K-sample grid, plus NoContact first.
// Deterministic ordering: family, edge indices, then arc.
std::vector<Grasp> enumerate_grasps(const Scene& scene, const PlannerConfig& cfg);

// Collision-based pose conditioning for one grasp (NoContact always passes).
bool grasp_feasible_at(const Grasp& g, const Scene& scene, const Pose2& pose,
                       double eps);

// Mechanics entries for the grasp contacts at a pose (mu = friction.mu_grip),
// sticking (full cone) by default.
std::vector<ContactEntry> grasp_entries(const GraspRealization& r, double mu);

}  // namespace ldhp

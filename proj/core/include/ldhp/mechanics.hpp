#pragma once
// Quasi-static Coulomb mechanics: friction cones, equilibrium feasibility via
// linear feasibility over cone-edge coefficients, contact modes, force
// closure, grasp quality.

#include <optional>
#include <vector>

#include "ldhp/geometry.hpp"
#include "ldhp/lp.hpp"

namespace ldhp {

struct Wrench {
  Vec2 force;
  double torque = 0.0;  // about the reference point used by the caller

  Wrench operator+(const Wrench& o) const { return {force + o.force, torque + o.torque}; }
};

enum class ContactMode { Sticking, Rolling, SlidingPos, SlidingNeg, Separating };
const char* contact_mode_name(ContactMode m);

// (left, right) unit rays at +/- atan(mu) around the normal.
std::pair<Vec2, Vec2> friction_cone(const Vec2& normal, double mu);

// One force generator set for a contact point: which cone edges may carry
// nonnegative coefficients.
struct ContactEntry {
  Contact contact;
  double mu = 0.0;
  bool allow_left = true;   // ray rotated +atan(mu)
  bool allow_right = true;  // ray rotated -atan(mu)
};

// A solved contact reaction (sums the entry's active cone-edge coefficients).
struct ContactForce {
  Contact contact;
  Vec2 f;
};

struct EquilibriumResult {
  bool feasible = false;
  // Cone-edge coefficients per expanded generator, and per-contact reactions.
  std::vector<double> coefficients;
  std::vector<ContactForce> reactions;
  double residual = 0.0;
};

// Does a nonnegative combination of cone-edge forces cancel `external`
// (typically gravity + extra wrench, torque about the CoM)? Line contacts are
// expanded to their two endpoints. `ref` is the torque reference (CoM, world)
// and `char_len` scales the torque row.
EquilibriumResult equilibrium_feasible(const std::vector<ContactEntry>& contacts,
                                       const Wrench& external, const Vec2& ref,
                                       double char_len);

// Mode of one contact for an instantaneous body twist (vx, vy, omega) given
// about the world origin. Thresholds scale with char_len.
struct Twist {
  double vx = 0.0, vy = 0.0, omega = 0.0;
  Vec2 velocity_at(const Vec2& p) const {
    return {vx - omega * p.y, vy + omega * p.x};
  }
};

ContactMode classify_mode(const Contact& contact, const Twist& twist,
                          double char_len);

// True iff the contact set's cone-edge wrenches positively span wrench space.
bool force_closure(const std::vector<ContactEntry>& contacts, const Vec2& ref,
                   double char_len);

// S = w1 * s + w2 * alpha. `s` is 1 unless the grasp contacts achieve force
// closure; `alpha` averages angle(reaction, normal) over sticking/rolling
// grasp contacts across motion samples, using each sample's certificate.
struct QualityInput {
  std::vector<ContactForce> grasp_reactions;  // from an equilibrium certificate
};

struct QualityResult {
  double s = 1.0;
  double alpha = 0.0;
  double score = 0.0;
  bool alpha_defined = true;  // false if no sample had a loaded grasp contact
};

QualityResult grasp_quality(const std::vector<ContactEntry>& grasp_contacts,
                            const std::vector<QualityInput>& motion_samples,
                            const Vec2& ref, double char_len, double w1, double w2);

// Re-check a certificate independently of the solver: cone membership and
// residual against the external wrench.
bool certificate_valid(const std::vector<ContactEntry>& contacts,
                       const std::vector<double>& coefficients,
                       const Wrench& external, const Vec2& ref, double char_len,
                       double tol = 1e-7);

}  // namespace ldhp

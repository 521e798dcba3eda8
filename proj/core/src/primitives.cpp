#include "ldhp/primitives.hpp"

#include <algorithm>
#include <cmath>

namespace ldhp {

const char* primitive_kind_name(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Tip: return "tip";
    case PrimitiveKind::Push: return "push";
    case PrimitiveKind::BiplanarSlide: return "biplanar-slide";
    case PrimitiveKind::AirMove: return "air-move";
    case PrimitiveKind::Open: return "open";
    case PrimitiveKind::Close: return "close";
    case PrimitiveKind::Pivot: return "pivot";
    case PrimitiveKind::Slide: return "slide";
    case PrimitiveKind::Flip: return "flip";
    case PrimitiveKind::ApproachContact: return "approach-contact";
  }
  return "?";
}

PrimitiveKind primitive_kind_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(PrimitiveKind::ApproachContact); ++i) {
    auto k = static_cast<PrimitiveKind>(i);
    if (name == primitive_kind_name(k)) return k;
  }
  throw std::invalid_argument("unknown primitive kind: " + name);
}

bool is_move_kind(PrimitiveKind k) {
  return k == PrimitiveKind::Tip || k == PrimitiveKind::Push ||
         k == PrimitiveKind::BiplanarSlide || k == PrimitiveKind::AirMove;
}
bool is_adjust_kind(PrimitiveKind k) { return !is_move_kind(k); }

PrimitiveInstance PrimitiveInstance::make_tip(Vec2 pivot, double angle,
                                              int obj_vertex, int env_edge) {
  PrimitiveInstance m;
  m.kind = PrimitiveKind::Tip;
  m.tip = {pivot, angle, obj_vertex, env_edge};
  return m;
}
PrimitiveInstance PrimitiveInstance::make_push(int env_edge, double travel,
                                               int obj_edge) {
  PrimitiveInstance m;
  m.kind = PrimitiveKind::Push;
  m.push = {env_edge, travel, obj_edge};
  return m;
}
PrimitiveInstance PrimitiveInstance::make_air(std::vector<Pose2> waypoints) {
  PrimitiveInstance m;
  m.kind = PrimitiveKind::AirMove;
  m.air.waypoints = std::move(waypoints);
  return m;
}

Pose2 biplanar_pose_at(const BiplanarParams& p, const Scene& scene, double theta) {
  // Constraint 1: object vertex V on the line of env edge p.
  // Constraint 2: object edge E touches the structure around env edge q
  // (an endpoint vertex of q riding on E, or E's far endpoint on q's line).
  const auto& obj = scene.object;
  const auto& env = scene.env;
  Segment ep = env.edge(p.env_edge_p);
  Segment eq = env.edge(p.env_edge_q);
  Vec2 np = perp(ep.dir());
  Vec2 v_o = obj.vertices[p.obj_vertex];
  Segment eo = obj.edge(p.obj_edge);
  Vec2 rv = rotated(v_o, theta);

  auto solve2 = [&](const Vec2& n2, double c2, const Vec2& off2) -> std::optional<Vec2> {
    // Solve pos from: dot(pos + rv - ep.a, np) = 0 and dot(pos + off2, n2) = c2.
    double a11 = np.x, a12 = np.y, b1 = dot(ep.a - rv, np);
    double a21 = n2.x, a22 = n2.y, b2 = c2 - dot(off2, n2);
    double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-12) return std::nullopt;
    return Vec2{(b1 * a22 - b2 * a12) / det, (b2 * a11 - b1 * a21) / det};
  };

  Vec2 ne_w = rotated(obj.edge_outward(p.obj_edge), theta);
  Vec2 ea_w = rotated(eo.a, theta);

  // 2a: the far endpoint of q (the outer corner) rides on E's line. The
  // endpoint shared with p is skipped: riding it degenerates into the
  // p-constraint.
  Vec2 shared = (norm(eq.a - ep.a) < 1e-9 || norm(eq.a - ep.b) < 1e-9) ? eq.a : eq.b;
  Vec2 far = (norm(shared - eq.a) < 1e-9) ? eq.b : eq.a;
  {
    const Vec2& w = far;
    auto pos = solve2(ne_w, dot(w, ne_w), ea_w);
    if (pos) {
      // Contact point must lie within E's span and the vertex within p's.
      Vec2 e0 = *pos + ea_w;
      Vec2 de = rotated(eo.b - eo.a, theta);
      double t = dot(w - e0, normalized(de));
      Vec2 vw = *pos + rv;
      double tv = dot(vw - ep.a, ep.dir());
      if (t >= -1e-6 && t <= norm(de) + 1e-6 && tv >= -1e-6 &&
          tv <= ep.length() + 1e-6)
        return Pose2(pos->x, pos->y, theta);
    }
  }

  // 2b: E's far endpoint on q's line.
  Vec2 far_vertex_o = (norm(eo.a - v_o) < 1e-9) ? eo.b : eo.a;
  Vec2 rfar = rotated(far_vertex_o, theta);
  Vec2 nq = perp(eq.dir());
  auto pos = solve2(nq, dot(eq.a, nq), rfar);
  if (pos) {
    Vec2 vq = *pos + rfar;
    double tq = dot(vq - eq.a, eq.dir());
    Vec2 vw = *pos + rv;
    double tv = dot(vw - ep.a, ep.dir());
    if (tq >= -1e-6 && tq <= eq.length() + 1e-6 && tv >= -1e-6 &&
        tv <= ep.length() + 1e-6)
      return Pose2(pos->x, pos->y, theta);
  }
  throw DegenerateGeometry("biplanar-slide constraints inconsistent at theta=" +
                           std::to_string(theta));
}

Pose2 apply_move(const PrimitiveInstance& m, const Pose2& t, const Scene& scene) {
  switch (m.kind) {
    case PrimitiveKind::Tip: {
      Vec2 rel = t.translation() - m.tip.pivot;
      Vec2 moved = rotated(rel, m.tip.angle) + m.tip.pivot;
      return Pose2(moved.x, moved.y, t.theta + m.tip.angle);
    }
    case PrimitiveKind::Push: {
      Vec2 d = scene.env.edge(m.push.env_edge).dir() * m.push.travel;
      return Pose2(t.x + d.x, t.y + d.y, t.theta);
    }
    case PrimitiveKind::BiplanarSlide:
      return biplanar_pose_at(m.biplanar, scene, m.biplanar.theta_end);
    case PrimitiveKind::AirMove:
      if (m.air.waypoints.empty())
        throw PreconditionViolated("air-move without waypoints");
      return m.air.waypoints.back();
    default:
      throw PreconditionViolated("apply_move on an AdjustGrasp primitive");
  }
}

std::vector<Pose2> discretize_move(const PrimitiveInstance& m, const Pose2& t,
                                   const Scene& scene, int j_steps) {
  std::vector<Pose2> out;
  out.reserve(j_steps + 1);
  switch (m.kind) {
    case PrimitiveKind::Tip:
      for (int j = 0; j <= j_steps; ++j) {
        double a = m.tip.angle * (double(j) / j_steps);
        Vec2 rel = t.translation() - m.tip.pivot;
        Vec2 moved = rotated(rel, a) + m.tip.pivot;
        out.emplace_back(moved.x, moved.y, t.theta + a);
      }
      break;
    case PrimitiveKind::Push: {
      Vec2 dir = scene.env.edge(m.push.env_edge).dir();
      for (int j = 0; j <= j_steps; ++j) {
        Vec2 d = dir * (m.push.travel * double(j) / j_steps);
        out.emplace_back(t.x + d.x, t.y + d.y, t.theta);
      }
      break;
    }
    case PrimitiveKind::BiplanarSlide:
      for (int j = 0; j <= j_steps; ++j) {
        double th = m.biplanar.theta_start +
                    (m.biplanar.theta_end - m.biplanar.theta_start) * double(j) / j_steps;
        out.push_back(biplanar_pose_at(m.biplanar, scene, th));
      }
      break;
    case PrimitiveKind::AirMove: {
      const auto& wp = m.air.waypoints;
      if (wp.size() < 2) throw PreconditionViolated("air-move needs >= 2 waypoints");
      // Piecewise-linear in SE(2), uniform in the total parameter.
      double total = 0;
      std::vector<double> lens;
      for (size_t i = 0; i + 1 < wp.size(); ++i) {
        double l = norm(wp[i + 1].translation() - wp[i].translation()) +
                   50.0 * std::abs(wrap_angle(wp[i + 1].theta - wp[i].theta));
        lens.push_back(std::max(l, 1e-9));
        total += lens.back();
      }
      for (int j = 0; j <= j_steps; ++j) {
        double s = total * double(j) / j_steps;
        size_t seg = 0;
        while (seg + 1 < lens.size() && s > lens[seg]) s -= lens[seg], ++seg;
        double u = std::clamp(s / lens[seg], 0.0, 1.0);
        const Pose2& a = wp[seg];
        const Pose2& b = wp[seg + 1];
        out.emplace_back(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u,
                         a.theta + wrap_angle(b.theta - a.theta) * u);
      }
      break;
    }
    default:
      throw PreconditionViolated("discretize_move on an AdjustGrasp primitive");
  }
  // Exact endpoints.
  out.front() = t;
  out.back() = apply_move(m, t, scene);
  return out;
}

PrimitiveInstance reverse_move(const PrimitiveInstance& m, const Pose2& t,
                               const Scene& scene) {
  PrimitiveInstance r = m;
  switch (m.kind) {
    case PrimitiveKind::Tip:
      r.tip.angle = -m.tip.angle;
      return r;
    case PrimitiveKind::Push:
      r.push.travel = -m.push.travel;
      return r;
    case PrimitiveKind::BiplanarSlide:
      std::swap(r.biplanar.theta_start, r.biplanar.theta_end);
      return r;
    case PrimitiveKind::AirMove: {
      std::vector<Pose2> wp(m.air.waypoints.rbegin(), m.air.waypoints.rend());
      if (wp.empty()) wp.push_back(t);
      r.air.waypoints = std::move(wp);
      return r;
    }
    default:
      throw PreconditionViolated("reverse_move on an AdjustGrasp primitive");
  }
  (void)scene;
}

std::pair<PrimitiveInstance, PrimitiveInstance> bisect_move(const PrimitiveInstance& m) {
  if (m.kind == PrimitiveKind::Tip) {
    PrimitiveInstance a = m, b = m;
    a.tip.angle = 0.5 * m.tip.angle;
    b.tip.angle = m.tip.angle - a.tip.angle;
    return {a, b};
  }
  if (m.kind == PrimitiveKind::BiplanarSlide) {
    PrimitiveInstance a = m, b = m;
    double mid = 0.5 * (m.biplanar.theta_start + m.biplanar.theta_end);
    a.biplanar.theta_end = mid;
    b.biplanar.theta_start = mid;
    return {a, b};
  }
  throw NotBisectable(std::string("cannot bisect ") + primitive_kind_name(m.kind));
}

namespace {

// Expand line contacts to their endpoints for mode and equilibrium handling.
std::vector<Contact> expand_contacts(const std::vector<Contact>& cs) {
  std::vector<Contact> out;
  for (const auto& c : cs) {
    if (!c.line_contact) {
      out.push_back(c);
      continue;
    }
    Contact p0 = c, p1 = c;
    p0.line_contact = p1.line_contact = false;
    p0.point = c.line_p0;
    p1.point = c.line_p1;
    out.push_back(p0);
    out.push_back(p1);
  }
  return out;
}

enum class PointMode { Stick, Roll, SlidePos, SlideNeg, Separate, Close };

// Exact per-step displacement of the body point at p under the rigid motion
// taking `from` to `to` (no linearization, so a tip pivot maps to itself).
struct StepMotion {
  Pose2 from, to;
  double dtheta;
  Vec2 displace(const Vec2& p) const {
    Vec2 rel = p - from.translation();
    return rotated(rel, dtheta) + to.translation() - p;
  }
};

StepMotion step_motion(const Pose2& from, const Pose2& to) {
  return {from, to, wrap_angle(to.theta - from.theta)};
}

PointMode point_mode(const Contact& c, const StepMotion& sm, double char_len) {
  // Threshold above the per-step displacement resolution: discretized rigid
  // steps carry O(dtheta^2 * L) noise at maintained feature contacts.
  double v_eps = std::max(1e-6 * char_len,
                          2.0 * sm.dtheta * sm.dtheta * char_len);
  Vec2 v = sm.displace(c.point);
  double vn = dot(v, c.normal);
  if (vn > v_eps) return PointMode::Separate;
  if (vn < -v_eps) return PointMode::Close;
  double vt = dot(v, perp(c.normal));
  if (std::abs(vt) > v_eps)
    return vt > 0 ? PointMode::SlidePos : PointMode::SlideNeg;
  if (std::abs(sm.dtheta) > 1e-9) return PointMode::Roll;
  return PointMode::Stick;
}

}  // namespace

bool rests_stably(const Scene& scene, const Pose2& t, const PlannerConfig& cfg) {
  return static_equilibrium_with_grasp(scene, t, nullptr, cfg);
}

bool static_equilibrium_with_grasp(const Scene& scene, const Pose2& t,
                                   const Grasp* grasp, const PlannerConfig& cfg) {
  auto contacts = expand_contacts(
      detect_contacts(scene.object, t, scene.env, cfg.contact_eps, cfg.angle_eps));
  std::vector<ContactEntry> entries;
  for (const auto& c : contacts) {
    ContactEntry e{c, scene.friction.env_mu(
        c.kind == ContactKind::ObjEdgeOnEnvVertex ? -1 : c.other_feature), true, true};
    if (c.kind == ContactKind::ObjEdgeOnEnvVertex) e.mu = scene.friction.mu_env;
    entries.push_back(e);
  }
  if (grasp && grasp->is_pair()) {
    auto r = realize(*grasp, scene.object, scene.gripper, t);
    for (const auto& c : r.contacts)
      entries.push_back({c, scene.friction.mu_grip, true, true});
  }
  Vec2 com_w = t.apply(scene.object.com);
  Wrench gravity{scene.gravity_force(), 0.0};
  auto res = equilibrium_feasible(entries, gravity, com_w, scene.char_length());
  return res.feasible;
}

FeasibilityReport move_feasible(const PrimitiveInstance& m, const Pose2& t,
                                const Scene& scene, const Grasp* grasp,
                                const PlannerConfig& cfg) {
  FeasibilityReport rep;
  std::vector<Pose2> poses;
  try {
    poses = discretize_move(m, t, scene, cfg.j_steps);
  } catch (const std::exception& e) {
    rep.reason = e.what();
    rep.fail_sample = 0;
    return rep;
  }
  int J = static_cast<int>(poses.size()) - 1;
  const bool has_grasp = grasp && grasp->is_pair();
  double char_len = scene.char_length();

  rep.samples.resize(J + 1);
  for (int j = 0; j <= J; ++j) {
    const Pose2& pj = poses[j];
    // (1) collision checks.
    if (collides(scene.object, pj, scene.env, cfg.contact_eps)) {
      rep.fail_sample = j;
      rep.reason = "object-environment collision";
      return rep;
    }
    GraspRealization gr;
    if (has_grasp) {
      gr = realize(*grasp, scene.object, scene.gripper, pj);
      if (fingers_collide(gr.fingers, scene.object, pj, scene.env, cfg.contact_eps)) {
        rep.fail_sample = j;
        rep.reason = "gripper collision";
        return rep;
      }
    }

    auto contacts = expand_contacts(
        detect_contacts(scene.object, pj, scene.env, cfg.contact_eps, cfg.angle_eps));

    // (2) contact-mode identification against the primitive's required modes.
    const Pose2& pn = (j < J) ? poses[j + 1] : poses[j];
    const Pose2& pp = (j < J) ? poses[j] : poses[j - 1];
    StepMotion sm = step_motion(pp, pn);
    bool moving = std::abs(sm.dtheta) > 1e-12 ||
                  norm(sm.to.translation() - sm.from.translation()) > 1e-12;

    std::vector<PointMode> modes(contacts.size(), PointMode::Stick);
    for (size_t i = 0; i < contacts.size(); ++i)
      modes[i] = moving ? point_mode(contacts[i], sm, char_len) : PointMode::Stick;

    auto fail_mode = [&](const char* why) {
      rep.fail_sample = j;
      rep.reason = why;
    };

    if (m.kind == PrimitiveKind::AirMove) {
      if (j > 0 && j < J && !contacts.empty()) {
        fail_mode("air-move touches the environment mid-flight");
        return rep;
      }
    } else if (m.kind == PrimitiveKind::Tip) {
      bool pivot_ok = false;
      for (size_t i = 0; i < contacts.size(); ++i) {
        double d = norm(contacts[i].point - m.tip.pivot);
        if (d <= std::max(2.0 * cfg.contact_eps, 2.0)) {
          if (modes[i] == PointMode::Stick || modes[i] == PointMode::Roll)
            pivot_ok = true;
        } else if (modes[i] != PointMode::Separate &&
                   modes[i] != PointMode::Close && j != 0) {
          // Closing contacts are still forming inside the tolerance band.
          fail_mode("tip requires separation away from the pivot");
          return rep;
        }
      }
      if (!pivot_ok) {
        fail_mode("tip pivot contact missing or not sticking/rolling");
        return rep;
      }
    } else if (m.kind == PrimitiveKind::Push) {
      bool slide_ok = false;
      for (size_t i = 0; i < contacts.size(); ++i) {
        bool on_edge = contacts[i].other_feature == m.push.env_edge &&
                       contacts[i].kind != ContactKind::ObjEdgeOnEnvVertex;
        if (on_edge && (modes[i] == PointMode::SlidePos ||
                        modes[i] == PointMode::SlideNeg))
          slide_ok = true;
        if (!on_edge && modes[i] != PointMode::Separate &&
            modes[i] != PointMode::Close && j != 0) {
          fail_mode("push requires separation off the contacted edge");
          return rep;
        }
      }
      if (!slide_ok && moving) {
        fail_mode("push requires sliding contact on the named edge");
        return rep;
      }
    } else if (m.kind == PrimitiveKind::BiplanarSlide) {
      // The two constraint contacts are maintained by the closed form; the
      // discretized normal rate at them is noise (including the handover from
      // corner-riding to wall-face sliding). Check presence and reclassify
      // them from the tangential rate only.
      bool on_p = false, on_q = false;
      for (size_t i = 0; i < contacts.size(); ++i) {
        bool is_p = contacts[i].other_feature == m.biplanar.env_edge_p &&
                    contacts[i].kind == ContactKind::ObjVertexOnEnvEdge &&
                    contacts[i].obj_feature == m.biplanar.obj_vertex;
        bool is_q = (contacts[i].kind == ContactKind::ObjEdgeOnEnvVertex &&
                     contacts[i].obj_feature == m.biplanar.obj_edge) ||
                    (contacts[i].kind == ContactKind::ObjVertexOnEnvEdge &&
                     contacts[i].other_feature == m.biplanar.env_edge_q);
        if (!is_p && !is_q) continue;
        on_p = on_p || is_p;
        on_q = on_q || is_q;
        if (moving) {
          double v_eps = std::max(1e-6 * char_len,
                                  2.0 * sm.dtheta * sm.dtheta * char_len);
          double vt = dot(sm.displace(contacts[i].point), perp(contacts[i].normal));
          modes[i] = std::abs(vt) > v_eps
                         ? (vt > 0 ? PointMode::SlidePos : PointMode::SlideNeg)
                         : PointMode::Stick;
        }
      }
      if (!(on_p && on_q) && j != 0 && j != J) {
        fail_mode("biplanar-slide lost one of its two contacts");
        return rep;
      }
    }

    // (3) quasi-static equilibrium. Interior samples use mode-consistent
    // cones (sliding contacts restricted to the opposing cone edge,
    // separating contacts dropped); the motion's endpoint samples are static
    // states, so every present contact keeps its full cone there.
    bool endpoint = (j == 0 || j == J);
    std::vector<ContactEntry> entries;
    for (size_t i = 0; i < contacts.size(); ++i) {
      if (!endpoint && (modes[i] == PointMode::Separate ||
                        modes[i] == PointMode::Close))
        continue;  // separating or still forming: unloaded mid-motion
      double mu = contacts[i].kind == ContactKind::ObjEdgeOnEnvVertex
                      ? scene.friction.mu_env
                      : scene.friction.env_mu(contacts[i].other_feature);
      ContactEntry e{contacts[i], mu, true, true};
      if (!endpoint) {
        if (modes[i] == PointMode::SlidePos) e.allow_left = false;
        if (modes[i] == PointMode::SlideNeg) e.allow_right = false;
      }
      entries.push_back(e);
    }
    size_t env_entries = entries.size();
    if (has_grasp)
      for (const auto& c : gr.contacts)
        entries.push_back({c, scene.friction.mu_grip, true, true});

    Vec2 com_w = pj.apply(scene.object.com);
    Wrench gravity{scene.gravity_force(), 0.0};
    auto eq = equilibrium_feasible(entries, gravity, com_w, char_len);
    if (!eq.feasible) {
      rep.fail_sample = j;
      rep.reason = "quasi-static equilibrium infeasible";
      return rep;
    }
    if (has_grasp) {
      QualityInput qi;
      for (size_t i = env_entries; i < entries.size(); ++i)
        qi.grasp_reactions.push_back(eq.reactions[i]);
      rep.samples[j] = std::move(qi);
    }
  }
  rep.feasible = true;
  return rep;
}

// ---------------------------------------------------------------------------
// AdjustGrasp transformers and feasibility.

namespace {

std::optional<GraspContact> project_to_boundary(const PolygonModel& obj,
                                                const Vec2& p_obj, double eps) {
  double best = eps;
  std::optional<GraspContact> out;
  for (int i = 0; i < obj.num_edges(); ++i) {
    Segment e = obj.edge(i);
    double d = dist_point_segment(p_obj, e);
    if (d <= best) {
      best = d;
      double t = dot(p_obj - e.a, e.dir()) / e.length();
      out = GraspContact{i, std::clamp(t, 0.0, 1.0)};
    }
  }
  return out;
}

}  // namespace

Grasp apply_adjust(const PrimitiveInstance& a, const Grasp& g, const Pose2& t,
                   const Scene& scene, const PlannerConfig& cfg) {
  const auto& obj = scene.object;
  switch (a.kind) {
    case PrimitiveKind::Open:
      if (!g.is_pair()) throw PreconditionViolated("open from no-contact");
      return Grasp::none();
    case PrimitiveKind::ApproachContact: {
      if (g.is_pair()) throw PreconditionViolated("approach-contact requires {0,0}");
      Grasp out = canonical(a.approach.target);
      if (!grasp_admissible(out, obj, scene.gripper, cfg.contact_eps, cfg.angle_eps))
        throw PreconditionViolated("approach-contact target not admissible");
      return out;
    }
    case PrimitiveKind::Close: {
      if (!g.is_pair() || g.family != GraspFamily::Press)
        throw PreconditionViolated("close applies to a press pair");
      if (scene.gripper.variant == GripperVariant::ConfigI)
        throw PreconditionViolated("close requires an actuated opening");
      Segment e = obj.edge(g.a.edge);
      double len = e.length();
      double shift = 0.5 * a.close.dw / len;
      Grasp out = g;
      out.a.s += shift;
      out.b.s -= shift;
      if (!grasp_admissible(out, obj, scene.gripper, cfg.contact_eps, cfg.angle_eps))
        throw PreconditionViolated("close result not admissible");
      return canonical(out);
    }
    case PrimitiveKind::Slide: {
      if (!g.is_pair()) throw PreconditionViolated("slide requires contact");
      Grasp out = g;
      auto slide_one = [&](GraspContact& c, double darc) {
        Segment e = obj.edge(c.edge);
        c.s += darc / e.length();
        if (c.s < -1e-9 || c.s > 1 + 1e-9)
          throw PreconditionViolated("slide leaves the edge");
        c.s = std::clamp(c.s, 0.0, 1.0);
      };
      if (a.slide.finger == 0 || a.slide.finger == 1) {
        if (g.family != GraspFamily::Press ||
            scene.gripper.variant != GripperVariant::ConfigII)
          throw PreconditionViolated("single-finger slide needs an actuated press");
        slide_one(a.slide.finger == 0 ? out.a : out.b, a.slide.darc);
      } else {
        // Rigid slide: both contacts translate by the same world vector.
        Vec2 d_world = t.apply_dir(obj.edge(g.a.edge).dir()) * a.slide.darc;
        Vec2 d_obj = rotated(d_world, -t.theta);
        auto move_contact = [&](GraspContact& c) {
          Vec2 p = boundary_point(obj, c.edge, c.s) + d_obj;
          auto proj = project_to_boundary(obj, p, 10.0 * cfg.contact_eps);
          if (!proj || proj->edge != c.edge)
            throw PreconditionViolated("rigid slide leaves the contacted edges");
          c = *proj;
        };
        move_contact(out.a);
        move_contact(out.b);
      }
      if (!grasp_admissible(out, obj, scene.gripper, cfg.contact_eps, cfg.angle_eps))
        throw PreconditionViolated("slide result not admissible");
      return canonical(out);
    }
    case PrimitiveKind::Flip: {
      if (!g.is_pair() || g.family != GraspFamily::Pinch)
        throw PreconditionViolated("flip applies to a pinch");
      Grasp out = g;
      out.sigma = -out.sigma;
      return canonical(out);
    }
    case PrimitiveKind::Pivot: {
      if (!g.is_pair()) throw PreconditionViolated("pivot requires contact");
      GraspContact keep = (a.pivot.finger == 0) ? g.a : g.b;
      GraspContact move = (a.pivot.finger == 0) ? g.b : g.a;
      Vec2 pk = boundary_point(obj, keep.edge, keep.s);
      Vec2 pm = boundary_point(obj, move.edge, move.s);
      Vec2 landed = pk + rotated(pm - pk, a.pivot.angle);
      auto proj = project_to_boundary(obj, landed, cfg.seat_tol(obj));
      if (!proj) throw PreconditionViolated("pivot lands off the boundary");
      Grasp out;
      out.a = keep;
      out.b = *proj;
      // Family from the landed face relation.
      Vec2 nk = obj.edge_outward(out.a.edge);
      Vec2 nl = obj.edge_outward(out.b.edge);
      // Shank after the rigid rotation.
      auto r0 = realize(g, obj, scene.gripper, Pose2());
      Vec2 shank = rotated(r0.shank, a.pivot.angle);
      if (out.a.edge == out.b.edge) {
        out.family = GraspFamily::Press;
        if (dot(shank, nk) < std::cos(0.3))
          throw PreconditionViolated("pivot lands a press with fingers into the face");
        out.sigma = +1;
      } else if (dot(nk, nl) < -std::cos(cfg.angle_eps)) {
        out.family = GraspFamily::Pinch;
        Vec2 axis = normalized(boundary_point(obj, out.b.edge, out.b.s) -
                               boundary_point(obj, out.a.edge, out.a.s));
        out.sigma = dot(shank, perp(axis)) >= 0 ? +1 : -1;
      } else {
        throw PreconditionViolated("pivot lands on an incompatible face");
      }
      if (!grasp_admissible(out, obj, scene.gripper, cfg.contact_eps, cfg.angle_eps))
        throw PreconditionViolated("pivot result not admissible");
      return canonical(out);
    }
    default:
      throw PreconditionViolated("apply_adjust on a MoveObject primitive");
  }
}

double adjust_travel(const PrimitiveInstance& a, const Grasp& g, const Pose2& t,
                     const Scene& scene) {
  const auto& obj = scene.object;
  switch (a.kind) {
    case PrimitiveKind::Open:
      return 2.0 * a.open.dw;
    case PrimitiveKind::ApproachContact:
      return 2.0 * a.approach.standoff;
    case PrimitiveKind::Close:
      return std::abs(a.close.dw);
    case PrimitiveKind::Slide:
      return (a.slide.finger < 0 ? 2.0 : 1.0) * std::abs(a.slide.darc);
    case PrimitiveKind::Flip: {
      if (!g.is_pair()) return 0.0;
      auto r = realize(g, obj, scene.gripper, t);
      return kPi * r.opening;  // both fingers sweep half circles
    }
    case PrimitiveKind::Pivot: {
      if (!g.is_pair()) return 0.0;
      auto r = realize(g, obj, scene.gripper, t);
      return std::abs(a.pivot.angle) * norm(r.pb - r.pa);
    }
    default:
      return 0.0;
  }
}

FeasibilityReport adjust_feasible(const PrimitiveInstance& a, const Grasp& g,
                                  const Pose2& t, const Scene& scene,
                                  const PlannerConfig& cfg,
                                  bool object_must_rest) {
  FeasibilityReport rep;
  Grasp result;
  try {
    result = apply_adjust(a, g, t, scene, cfg);
  } catch (const std::exception& e) {
    rep.reason = e.what();
    return rep;
  }
  if (result.is_pair() && !grasp_feasible_at(result, scene, t, cfg.contact_eps)) {
    rep.reason = "resulting grasp collides";
    return rep;
  }

  const int steps = 8;
  auto env_only_rest = [&]() {
    return !object_must_rest || rests_stably(scene, t, cfg);
  };

  switch (a.kind) {
    case PrimitiveKind::Open:
    case PrimitiveKind::ApproachContact: {
      const Grasp& pair = a.kind == PrimitiveKind::Open ? g : result;
      double stand = a.kind == PrimitiveKind::Open ? a.open.dw : a.approach.standoff;
      auto r = realize(pair, scene.object, scene.gripper, t);
      for (int k = 0; k <= steps; ++k) {
        Vec2 off = r.shank * (stand * double(k) / steps);
        auto fingers = r.fingers;
        for (auto& f : fingers) {
          if (f.type == FingerShape::Type::Capsule) {
            f.seg.a += off;
            f.seg.b += off;
          } else {
            f.center += off;
          }
        }
        if (fingers_collide(fingers, scene.object, t, scene.env, cfg.contact_eps)) {
          rep.fail_sample = k;
          rep.reason = "finger path collides";
          return rep;
        }
      }
      if (!env_only_rest()) {
        rep.reason = "object cannot rest without the grasp";
        return rep;
      }
      break;
    }
    case PrimitiveKind::Slide:
    case PrimitiveKind::Close: {
      for (int k = 0; k <= steps; ++k) {
        double u = double(k) / steps;
        Grasp mid = g;
        mid.a.s = g.a.s + (result.a.s - g.a.s) * u;
        mid.b.s = g.b.s + (result.b.s - g.b.s) * u;
        if (mid.a.edge != result.a.edge || mid.b.edge != result.b.edge) continue;
        if (!grasp_feasible_at(mid, scene, t, cfg.contact_eps)) {
          rep.fail_sample = k;
          rep.reason = "finger path collides";
          return rep;
        }
      }
      if (object_must_rest &&
          !static_equilibrium_with_grasp(scene, t, &g, cfg)) {
        rep.reason = "object not held during slide";
        return rep;
      }
      break;
    }
    case PrimitiveKind::Pivot: {
      // Instantaneous reassignment; the swinging finger is checked against the
      // environment only (it clears the object out of plane).
      auto poly = transform_points(scene.object.vertices, t);
      Vec2 com_w = t.apply(scene.object.com);
      auto r = realize(g, scene.object, scene.gripper, t);
      Vec2 pk = a.pivot.finger == 0 ? r.pa : r.pb;
      for (int k = 1; k < steps; ++k) {
        double ang = a.pivot.angle * double(k) / steps;
        auto rot_about = [&](Vec2 p) { return pk + rotated(p - pk, ang); };
        for (size_t fi = 0; fi < r.fingers.size(); ++fi) {
          bool belongs_to_a = static_cast<int>(fi) < r.finger_split;
          if ((a.pivot.finger == 0) == belongs_to_a) continue;  // kept finger
          FingerShape f = r.fingers[fi];
          if (f.type == FingerShape::Type::Capsule) {
            f.seg.a = rot_about(f.seg.a);
            f.seg.b = rot_about(f.seg.b);
          } else {
            f.center = rot_about(f.center);
            f.axis_u = rotated(f.axis_u, ang);
          }
          if (finger_env_penetration(f, scene.env, poly, com_w,
                                     2.0 * cfg.contact_eps + 1.0) > cfg.contact_eps) {
            rep.fail_sample = k;
            rep.reason = "pivot sweep hits the environment";
            return rep;
          }
        }
      }
      break;
    }
    case PrimitiveKind::Flip: {
      auto poly = transform_points(scene.object.vertices, t);
      Vec2 com_w = t.apply(scene.object.com);
      auto r = realize(g, scene.object, scene.gripper, t);
      for (int k = 1; k < steps; ++k) {
        double ang = kPi * double(k) / steps;
        for (auto f : r.fingers) {
          auto rot_about = [&](Vec2 p) { return r.center + rotated(p - r.center, ang); };
          if (f.type == FingerShape::Type::Capsule) {
            f.seg.a = rot_about(f.seg.a);
            f.seg.b = rot_about(f.seg.b);
          } else {
            f.center = rot_about(f.center);
            f.axis_u = rotated(f.axis_u, ang);
          }
          if (finger_env_penetration(f, scene.env, poly, com_w,
                                     2.0 * cfg.contact_eps + 1.0) > cfg.contact_eps) {
            rep.fail_sample = k;
            rep.reason = "flip sweep hits the environment";
            return rep;
          }
        }
      }
      break;
    }
    default:
      rep.reason = "not an AdjustGrasp primitive";
      return rep;
  }
  rep.feasible = true;
  return rep;
}

}  // namespace ldhp

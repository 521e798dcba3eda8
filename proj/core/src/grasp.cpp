#include "ldhp/grasp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ldhp {

namespace {
int64_t quant(double s) { return static_cast<int64_t>(std::llround(s * 1e7)); }
}

bool GraspKey::operator<(const GraspKey& o) const {
  if (family != o.family) return family < o.family;
  if (ea != o.ea) return ea < o.ea;
  if (eb != o.eb) return eb < o.eb;
  if (sa != o.sa) return sa < o.sa;
  if (sb != o.sb) return sb < o.sb;
  return sigma < o.sigma;
}
bool GraspKey::operator==(const GraspKey& o) const {
  return family == o.family && ea == o.ea && eb == o.eb && sa == o.sa &&
         sb == o.sb && sigma == o.sigma;
}

Grasp canonical(const Grasp& g) {
  if (!g.is_pair()) return Grasp::none();
  Grasp c = g;
  bool swap = (c.b.edge < c.a.edge) ||
              (c.b.edge == c.a.edge && c.b.s < c.a.s);
  if (swap) {
    std::swap(c.a, c.b);
    if (c.family == GraspFamily::Pinch) c.sigma = -c.sigma;
  }
  if (c.family == GraspFamily::Press) c.sigma = +1;
  return c;
}

GraspKey grasp_key(const Grasp& g) {
  Grasp c = canonical(g);
  return GraspKey{static_cast<int>(c.family), c.a.edge, c.b.edge,
                  quant(c.a.s), quant(c.b.s), c.sigma};
}

bool grasps_match(const Grasp& a, const Grasp& b, const PolygonModel& object,
                  double tol_mm) {
  Grasp ca = canonical(a), cb = canonical(b);
  if (ca.family != cb.family) return false;
  if (!ca.is_pair()) return true;
  if (ca.a.edge != cb.a.edge || ca.b.edge != cb.b.edge || ca.sigma != cb.sigma)
    return false;
  return norm(boundary_point(object, ca.a.edge, ca.a.s) -
              boundary_point(object, cb.a.edge, cb.a.s)) <= tol_mm &&
         norm(boundary_point(object, ca.b.edge, ca.b.s) -
              boundary_point(object, cb.b.edge, cb.b.s)) <= tol_mm;
}

std::string grasp_label(const Grasp& g) {
  if (!g.is_pair()) return "{0,0}";
  std::ostringstream os;
  os.precision(3);
  os << std::fixed;
  os << (g.family == GraspFamily::Pinch ? "pinch" : "press") << "{e" << g.a.edge
     << "@" << g.a.s << ",e" << g.b.edge << "@" << g.b.s << ","
     << (g.sigma > 0 ? "+" : "-") << "}";
  return os.str();
}

GraspRealization realize(const Grasp& g, const PolygonModel& object,
                         const GripperModel& gripper, const Pose2& pose) {
  GraspRealization r;
  if (!g.is_pair()) return r;
  Vec2 pa_o = boundary_point(object, g.a.edge, g.a.s);
  Vec2 pb_o = boundary_point(object, g.b.edge, g.b.s);
  r.pa = pose.apply(pa_o);
  r.pb = pose.apply(pb_o);
  r.na = pose.apply_dir(object.edge_outward(g.a.edge));
  r.nb = pose.apply_dir(object.edge_outward(g.b.edge));
  r.center = (r.pa + r.pb) * 0.5;

  if (g.family == GraspFamily::Pinch) {
    Vec2 axis = normalized(r.pb - r.pa);
    r.shank = perp(axis) * static_cast<double>(g.sigma);
    r.opening = norm(r.pb - r.pa);
  } else {
    r.shank = r.na;  // press: fingers point along the face outward normal
    r.opening = norm(r.pb - r.pa);
  }

  auto make_finger = [&](const Vec2& p, const Vec2& n) -> std::vector<FingerShape> {
    std::vector<FingerShape> parts;
    if (gripper.variant == GripperVariant::ConfigI) {
      FingerShape f;
      f.type = FingerShape::Type::Capsule;
      f.radius = gripper.finger_radius;
      Vec2 tip = p + n * gripper.finger_radius;
      // Shank bent tangent along the face when the common axis dives into it;
      // proxy for the flank-contact geometry of a cylindrical finger.
      Vec2 dir = r.shank;
      double d = dot(dir, n);
      if (d < 0) dir = normalized(dir - n * d);
      if (norm(dir) < 0.5) dir = n;
      f.seg = {tip, tip + dir * gripper.shank_length};
      parts.push_back(f);
      return parts;
    }
    if (g.family == GraspFamily::Pinch) {
      // Pad flush on the face, biased toward the carriage side; the shank box
      // continues along the finger axis. The asymmetry is what makes flips
      // and pivots geometrically meaningful.
      Vec2 t = perp(n);
      if (dot(t, r.shank) < 0) t = -t;
      double tip_over = 5.0;  // pad extent past the contact on the tip side
      FingerShape pad;
      pad.type = FingerShape::Type::Box;
      pad.center = p + n * (gripper.pad_width * 0.5) +
                   t * (gripper.pad_length * 0.5 - tip_over);
      pad.axis_u = t;
      pad.half_u = gripper.pad_length * 0.5;
      pad.half_v = gripper.pad_width * 0.5;
      parts.push_back(pad);
      FingerShape shank;
      shank.type = FingerShape::Type::Box;
      shank.center = p + n * (gripper.pad_width * 0.5) +
                     t * (gripper.pad_length - tip_over +
                          gripper.shank_length * 0.5);
      shank.axis_u = t;
      shank.half_u = gripper.shank_length * 0.5;
      shank.half_v = gripper.pad_width * 0.5;
      parts.push_back(shank);
    } else {
      // Tip-end contact: pad and shank extend away from the face.
      FingerShape pad;
      pad.type = FingerShape::Type::Box;
      pad.center = p + n * (gripper.pad_length * 0.5);
      pad.axis_u = n;
      pad.half_u = gripper.pad_length * 0.5;
      pad.half_v = gripper.pad_width * 0.5;
      parts.push_back(pad);
      FingerShape shank;
      shank.type = FingerShape::Type::Box;
      shank.center = p + n * (gripper.pad_length + gripper.shank_length * 0.5);
      shank.axis_u = n;
      shank.half_u = gripper.shank_length * 0.5;
      shank.half_v = gripper.pad_width * 0.5;
      parts.push_back(shank);
    }
    return parts;
  };
  for (auto& f : make_finger(r.pa, r.na)) r.fingers.push_back(f);
  r.finger_split = static_cast<int>(r.fingers.size());
  for (auto& f : make_finger(r.pb, r.nb)) r.fingers.push_back(f);

  auto make_contact = [&](const Vec2& p, const Vec2& n, int edge) {
    Contact c;
    c.kind = ContactKind::FingerOnObjEdge;
    c.obj_feature = edge;
    c.other_feature = 0;
    c.point = p;
    c.normal = -n;  // finger pushes into the object
    return c;
  };
  r.contacts.push_back(make_contact(r.pa, r.na, g.a.edge));
  r.contacts.push_back(make_contact(r.pb, r.nb, g.b.edge));
  return r;
}

bool grasp_admissible(const Grasp& g, const PolygonModel& object,
                      const GripperModel& gripper, double contact_eps,
                      double angle_eps) {
  if (!g.is_pair()) return true;
  if (g.a.edge < 0 || g.a.edge >= object.num_edges() || g.b.edge < 0 ||
      g.b.edge >= object.num_edges())
    return false;
  if (g.a.s < 0 || g.a.s > 1 || g.b.s < 0 || g.b.s > 1) return false;
  Vec2 pa = boundary_point(object, g.a.edge, g.a.s);
  Vec2 pb = boundary_point(object, g.b.edge, g.b.s);
  double dist = norm(pb - pa);
  if (dist <= contact_eps) return false;  // distinct points

  if (g.family == GraspFamily::Press) {
    if (g.a.edge != g.b.edge) return false;
    if (gripper.variant == GripperVariant::ConfigI)
      return std::abs(dist - gripper.finger_spacing) <= contact_eps;
    double lo = gripper.opening_min + gripper.pad_width;
    double hi = gripper.opening_max + gripper.pad_width;
    return dist >= lo - contact_eps && dist <= hi + contact_eps;
  }

  // Pinch: anti-parallel faces.
  Vec2 na = object.edge_outward(g.a.edge);
  Vec2 nb = object.edge_outward(g.b.edge);
  if (dot(na, nb) > -std::cos(angle_eps)) return false;
  if (gripper.variant == GripperVariant::ConfigI)
    return std::abs(dist - gripper.finger_spacing) <= contact_eps;
  // Config II pads must close squarely: pair axis along the normals.
  Vec2 axis = normalized(pb - pa);
  if (std::abs(cross(axis, na)) > 2e-2) return false;
  return dist >= gripper.opening_min - contact_eps &&
         dist <= gripper.opening_max + contact_eps;
}

std::vector<Grasp> enumerate_grasps(const Scene& scene, const PlannerConfig& cfg) {
  std::vector<Grasp> out;
  out.push_back(Grasp::none());
  const auto& obj = scene.object;
  const auto& grip = scene.gripper;
  int n = obj.num_edges();
  int K = cfg.k_samples;

  auto sample = [&](int k) { return (k + 0.5) / K; };

  // Pinch pairs across anti-parallel edges.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec2 ni = obj.edge_outward(i), nj = obj.edge_outward(j);
      if (dot(ni, nj) > -std::cos(cfg.angle_eps)) continue;
      for (int ka = 0; ka < K; ++ka) {
        Vec2 pa = boundary_point(obj, i, sample(ka));
        if (grip.variant == GripperVariant::ConfigI) {
          for (int kb = 0; kb < K; ++kb) {
            Grasp g;
            g.family = GraspFamily::Pinch;
            g.a = {i, sample(ka)};
            g.b = {j, sample(kb)};
            if (!grasp_admissible(g, obj, grip, cfg.contact_eps, cfg.angle_eps))
              continue;
            for (int sigma : {+1, -1}) {
              g.sigma = sigma;
              out.push_back(canonical(g));
            }
          }
        } else {
          // Perpendicular partner: foot of pa on edge j's line.
          Segment ej = obj.edge(j);
          Vec2 d = ej.dir();
          double t = dot(pa - ej.a, d);
          if (t < 0 || t > ej.length()) continue;
          Grasp g;
          g.family = GraspFamily::Pinch;
          g.a = {i, sample(ka)};
          g.b = {j, t / ej.length()};
          if (!grasp_admissible(g, obj, grip, cfg.contact_eps, cfg.angle_eps))
            continue;
          for (int sigma : {+1, -1}) {
            g.sigma = sigma;
            out.push_back(canonical(g));
          }
        }
      }
    }
  }

  // Press pairs on a single edge. Partner stride keeps the set tractable.
  int stride = std::max(1, K / 25);
  for (int i = 0; i < n; ++i) {
    for (int ka = 0; ka < K; ++ka) {
      for (int kb = ka + 1; kb < K; kb += stride) {
        Grasp g;
        g.family = GraspFamily::Press;
        g.a = {i, sample(ka)};
        g.b = {i, sample(kb)};
        if (!grasp_admissible(g, obj, grip, cfg.contact_eps, cfg.angle_eps))
          continue;
        out.push_back(canonical(g));
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const Grasp& x, const Grasp& y) { return grasp_key(x) < grasp_key(y); });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Grasp& x, const Grasp& y) {
                          return grasp_key(x) == grasp_key(y);
                        }),
            out.end());
  return out;
}

bool grasp_feasible_at(const Grasp& g, const Scene& scene, const Pose2& pose,
                       double eps) {
  if (!g.is_pair()) return true;
  auto r = realize(g, scene.object, scene.gripper, pose);
  return !fingers_collide(r.fingers, scene.object, pose, scene.env, eps);
}

std::vector<ContactEntry> grasp_entries(const GraspRealization& r, double mu) {
  std::vector<ContactEntry> out;
  for (const auto& c : r.contacts) out.push_back({c, mu, true, true});
  return out;
}

}  // namespace ldhp

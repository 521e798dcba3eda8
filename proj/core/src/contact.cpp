#include "ldhp/contact.hpp"

#include <algorithm>

namespace ldhp {

bool collides(const PolygonModel& object, const Pose2& pose,
              const EnvBoundary& env, double eps) {
  std::vector<Vec2> poly = transform_points(object.vertices, pose);
  Aabb pb = bounds_of(poly);
  pb.lo -= Vec2{eps + 1.0, eps + 1.0};
  pb.hi += Vec2{eps + 1.0, eps + 1.0};
  for (const auto& v : env.vertices) {
    if (v.x < pb.lo.x || v.x > pb.hi.x || v.y < pb.lo.y || v.y > pb.hi.y) continue;
    if (point_depth_in_polygon(v, poly) > eps) return true;
  }
  for (int j = 0; j < env.num_edges(); ++j) {
    Segment s = env.edge(j);
    Aabb sb;
    sb.grow(s.a);
    sb.grow(s.b);
    if (sb.hi.x < pb.lo.x || sb.lo.x > pb.hi.x || sb.hi.y < pb.lo.y || sb.lo.y > pb.hi.y)
      continue;
    if (segment_depth_in_polygon(s, poly) > eps) return true;
  }
  return false;
}

Vec2 boundary_point(const PolygonModel& object, int edge, double s) {
  if (edge < 0 || edge >= object.num_edges())
    throw std::out_of_range("boundary_point: edge index out of range");
  if (s < -1e-12 || s > 1.0 + 1e-12)
    throw std::out_of_range("boundary_point: s outside [0,1]");
  Segment e = object.edge(edge);
  return e.a + (e.b - e.a) * std::clamp(s, 0.0, 1.0);
}

namespace {

// Orient an env edge normal so it points from the env edge toward the object
// side (into the object). `probe` is a point known to lie toward the object.
Vec2 oriented_env_normal(const Segment& env_edge, const Vec2& probe) {
  Vec2 n = perp(env_edge.dir());
  Vec2 mid = (env_edge.a + env_edge.b) * 0.5;
  if (dot(probe - mid, n) < 0) n = -n;
  return n;
}

}  // namespace

std::vector<Contact> detect_contacts(const PolygonModel& object, const Pose2& pose,
                                     const EnvBoundary& env, double eps,
                                     double angle_eps) {
  std::vector<Vec2> poly = transform_points(object.vertices, pose);
  Vec2 com_w = pose.apply(object.com);
  int n_obj = object.num_edges();
  std::vector<Contact> out;

  // Edge-edge contacts first; they suppress the vertex contacts they contain.
  std::vector<std::vector<bool>> vertex_taken(poly.size(),
                                              std::vector<bool>(env.num_edges(), false));
  for (int i = 0; i < n_obj; ++i) {
    Segment oe{poly[i], poly[(i + 1) % n_obj]};
    Vec2 o_dir = oe.dir();
    for (int j = 0; j < env.num_edges(); ++j) {
      Segment ee = env.edge(j);
      // Parallel or anti-parallel within angle_eps.
      double s = std::abs(cross(o_dir, ee.dir()));
      if (s > std::sin(angle_eps)) continue;
      if (dist_segment_segment(oe, ee) > eps) continue;
      // Overlap interval along the env edge direction.
      Vec2 d = ee.dir();
      double e0 = dot(ee.a, d), e1 = dot(ee.b, d);
      double o0 = dot(oe.a, d), o1 = dot(oe.b, d);
      double lo = std::max(std::min(e0, e1), std::min(o0, o1));
      double hi = std::min(std::max(e0, e1), std::max(o0, o1));
      if (hi - lo <= eps) continue;  // degenerate overlap -> vertex contacts
      Vec2 n = oriented_env_normal(ee, com_w);
      Contact c;
      c.kind = ContactKind::ObjEdgeOnEnvEdge;
      c.obj_feature = i;
      c.other_feature = j;
      c.line_contact = true;
      // Overlap endpoints projected onto the env edge.
      Vec2 base = ee.a;
      double b0 = dot(base, d);
      c.line_p0 = base + d * (lo - b0);
      c.line_p1 = base + d * (hi - b0);
      c.point = (c.line_p0 + c.line_p1) * 0.5;
      c.normal = n;
      out.push_back(c);
      vertex_taken[i][j] = true;
      vertex_taken[(i + 1) % n_obj][j] = true;
    }
  }

  // Object vertex on env edge.
  for (int i = 0; i < n_obj; ++i) {
    for (int j = 0; j < env.num_edges(); ++j) {
      if (vertex_taken[i][j]) continue;
      Segment ee = env.edge(j);
      if (dist_point_segment(poly[i], ee) > eps) continue;
      Contact c;
      c.kind = ContactKind::ObjVertexOnEnvEdge;
      c.obj_feature = i;
      c.other_feature = j;
      c.point = closest_point_segment(poly[i], ee);
      // Push direction: from env toward the object. Prefer the vertex itself
      // if it is measurably off the line, else the object interior.
      Vec2 probe = poly[i];
      if (dist_point_segment(probe, ee) < 1e-9) probe = com_w;
      c.normal = oriented_env_normal(ee, probe);
      out.push_back(c);
    }
  }

  // Env vertex on object edge (skip env endpoints that already sit on a
  // reported edge-edge overlap).
  for (size_t k = 0; k < env.vertices.size(); ++k) {
    const Vec2& v = env.vertices[k];
    for (int i = 0; i < n_obj; ++i) {
      Segment oe{poly[i], poly[(i + 1) % n_obj]};
      if (dist_point_segment(v, oe) > eps) continue;
      // Not at the object vertices (those are the cases above).
      if (norm(v - oe.a) <= eps || norm(v - oe.b) <= eps) continue;
      bool covered = false;
      for (const auto& c : out)
        if (c.line_contact && c.obj_feature == i &&
            dist_point_segment(v, {c.line_p0, c.line_p1}) <= eps)
          covered = true;
      if (covered) continue;
      Contact c;
      c.kind = ContactKind::ObjEdgeOnEnvVertex;
      c.obj_feature = i;
      c.other_feature = static_cast<int>(k);
      c.point = closest_point_segment(v, oe);
      // Env vertex pushes along the object edge's inward normal.
      Vec2 outward = -perp(oe.dir());
      c.normal = -outward;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Vec2> FingerShape::box_corners() const {
  Vec2 u = axis_u * half_u;
  Vec2 v = perp(axis_u) * half_v;
  return {center + u + v, center - u + v, center - u - v, center + u - v};
}

double finger_object_penetration(const FingerShape& f, const PolygonModel& object,
                                 const Pose2& pose) {
  std::vector<Vec2> poly = transform_points(object.vertices, pose);
  if (f.type == FingerShape::Type::Capsule) {
    // Depth of the capsule into the polygon: distance from axis to boundary
    // versus radius, on both sides.
    double depth = 0.0;
    const int samples = 8;
    for (int k = 0; k <= samples; ++k) {
      Vec2 p = f.seg.a + (f.seg.b - f.seg.a) * (double(k) / samples);
      double d_inside = point_depth_in_polygon(p, poly);
      if (d_inside > 0) {
        depth = std::max(depth, d_inside + f.radius);
      } else {
        double d = dist_point_polygon_boundary(p, poly);
        depth = std::max(depth, f.radius - d);
      }
    }
    // Segment may cross the polygon between samples.
    double seg_depth = segment_depth_in_polygon(f.seg, poly);
    if (seg_depth > 0) depth = std::max(depth, seg_depth + f.radius);
    return std::max(depth, 0.0);
  }
  // Box: sample its boundary and check polygon vertices inside the box.
  auto corners = f.box_corners();
  double depth = 0.0;
  for (int e = 0; e < 4; ++e) {
    Segment s{corners[e], corners[(e + 1) % 4]};
    depth = std::max(depth, segment_depth_in_polygon(s, poly));
  }
  // Polygon vertex swallowed by the box (box fully covering a spike).
  for (const auto& pv : poly) {
    Vec2 rel = pv - f.center;
    double du = std::abs(dot(rel, f.axis_u));
    double dv = std::abs(dot(rel, perp(f.axis_u)));
    if (du <= f.half_u && dv <= f.half_v)
      depth = std::max(depth, std::min(f.half_u - du, f.half_v - dv) + 1e-9);
  }
  return depth;
}

double finger_env_penetration(const FingerShape& f, const EnvBoundary& env,
                              const std::vector<Vec2>& obj_poly_world,
                              const Vec2& com_w, double support_prox) {
  double depth = 0.0;
  // Probe points spanning the finger body.
  std::vector<std::pair<Vec2, double>> probes;  // point, body radius at point
  if (f.type == FingerShape::Type::Capsule) {
    for (int k = 0; k <= 4; ++k)
      probes.push_back({f.seg.a + (f.seg.b - f.seg.a) * (k / 4.0), f.radius});
  } else {
    auto corners = f.box_corners();
    for (int k = 0; k < 4; ++k) {
      probes.push_back({corners[k], 0.0});
      probes.push_back({(corners[k] + corners[(k + 1) % 4]) * 0.5, 0.0});
    }
    probes.push_back({f.center, 0.0});
  }

  for (int j = 0; j < env.num_edges(); ++j) {
    Segment ee = env.edge(j);
    // Is the object resting on / touching this segment?
    double obj_dist = 1e300;
    int n = static_cast<int>(obj_poly_world.size());
    for (int i = 0; i < n; ++i)
      obj_dist = std::min(obj_dist,
                          dist_segment_segment(ee, {obj_poly_world[i],
                                                    obj_poly_world[(i + 1) % n]}));
    if (obj_dist <= support_prox) {
      // Locally solid on the side away from the object CoM.
      Vec2 m = perp(ee.dir());
      double com_side = dot(com_w - ee.a, m);
      if (std::abs(com_side) > 1e-9) {
        if (com_side < 0) m = -m;  // m points toward the object side
        double len = ee.length();
        for (const auto& [p, r] : probes) {
          double along = dot(p - ee.a, ee.dir());
          if (along < -r || along > len + r) continue;
          double beyond = -(dot(p - ee.a, m)) + r;  // reach into the solid side
          depth = std::max(depth, beyond);
        }
        continue;
      }
    }
    // Plain curve crossing.
    if (f.type == FingerShape::Type::Capsule) {
      double d = dist_segment_segment(f.seg, ee);
      depth = std::max(depth, f.radius - d);
    } else {
      const int samples = 16;
      for (int k = 0; k <= samples; ++k) {
        Vec2 p = ee.a + (ee.b - ee.a) * (double(k) / samples);
        Vec2 rel = p - f.center;
        double du = std::abs(dot(rel, f.axis_u));
        double dv = std::abs(dot(rel, perp(f.axis_u)));
        if (du <= f.half_u && dv <= f.half_v)
          depth = std::max(depth, std::min(f.half_u - du, f.half_v - dv));
      }
    }
  }
  return std::max(depth, 0.0);
}

bool fingers_collide(const std::vector<FingerShape>& fingers,
                     const PolygonModel& object, const Pose2& obj_pose,
                     const EnvBoundary& env, double eps) {
  auto poly = transform_points(object.vertices, obj_pose);
  Vec2 com_w = obj_pose.apply(object.com);
  for (const auto& f : fingers) {
    if (finger_object_penetration(f, object, obj_pose) > eps) return true;
    if (finger_env_penetration(f, env, poly, com_w, 2.0 * eps + 1.0) > eps)
      return true;
  }
  return false;
}

}  // namespace ldhp

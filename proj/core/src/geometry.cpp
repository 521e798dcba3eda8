#include "ldhp/geometry.hpp"

#include <algorithm>

namespace ldhp {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

std::vector<Vec2> transform_points(const std::vector<Vec2>& pts, const Pose2& pose) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(pose.apply(p));
  return out;
}

double dist_point_segment(const Vec2& p, const Segment& s) {
  return norm(p - closest_point_segment(p, s));
}

Vec2 closest_point_segment(const Vec2& p, const Segment& s) {
  Vec2 d = s.b - s.a;
  double len2 = norm2(d);
  if (len2 <= 0) return s.a;
  double t = dot(p - s.a, d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return s.a + d * t;
}

namespace {
int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  double v = cross(b - a, c - a);
  const double eps = 1e-12 * (norm(b - a) + norm(c - a) + 1.0);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}
bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}
}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
  int d1 = orient(s.a, s.b, t.a);
  int d2 = orient(s.a, s.b, t.b);
  int d3 = orient(t.a, t.b, s.a);
  int d4 = orient(t.a, t.b, s.b);
  if (d1 != d2 && d3 != d4) return true;
  if (d1 == 0 && on_segment(s.a, s.b, t.a)) return true;
  if (d2 == 0 && on_segment(s.a, s.b, t.b)) return true;
  if (d3 == 0 && on_segment(t.a, t.b, s.a)) return true;
  if (d4 == 0 && on_segment(t.a, t.b, s.b)) return true;
  return false;
}

double dist_segment_segment(const Segment& s, const Segment& t) {
  if (segments_intersect(s, t)) return 0.0;
  double d = dist_point_segment(s.a, t);
  d = std::min(d, dist_point_segment(s.b, t));
  d = std::min(d, dist_point_segment(t.a, s));
  d = std::min(d, dist_point_segment(t.b, s));
  return d;
}

bool polygon_is_ccw(const std::vector<Vec2>& poly) {
  return polygon_area(poly) > 0.0;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  int n = static_cast<int>(poly.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    Segment si{poly[i], poly[(i + 1) % n]};
    if (si.length() <= 1e-12) return false;
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      Segment sj{poly[j], poly[(j + 1) % n]};
      if (segments_intersect(si, sj)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  // Crossing number with robust handling of horizontal rays.
  bool inside = false;
  int n = static_cast<int>(poly.size());
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[j];
    const Vec2& b = poly[i];
    if ((b.y > p.y) != (a.y > p.y)) {
      double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

double dist_point_polygon_boundary(const Vec2& p, const std::vector<Vec2>& poly) {
  double best = 1e300;
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    best = std::min(best, dist_point_segment(p, {poly[i], poly[(i + 1) % n]}));
  }
  return best;
}

double point_depth_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  if (!point_in_polygon(p, poly)) return 0.0;
  return dist_point_polygon_boundary(p, poly);
}

double segment_depth_in_polygon(const Segment& s, const std::vector<Vec2>& poly) {
  // Gather boundary crossing parameters, then probe interior sub-segments.
  std::vector<double> ts{0.0, 1.0};
  int n = static_cast<int>(poly.size());
  Vec2 d = s.b - s.a;
  for (int i = 0; i < n; ++i) {
    Vec2 qa = poly[i], qb = poly[(i + 1) % n];
    Vec2 e = qb - qa;
    double denom = cross(d, e);
    if (std::abs(denom) < 1e-14) continue;
    double t = cross(qa - s.a, e) / denom;
    double u = cross(qa - s.a, d) / denom;
    if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  double depth = 0.0;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    double mid = 0.5 * (ts[i] + ts[i + 1]);
    Vec2 pm = s.a + d * mid;
    if (!point_in_polygon(pm, poly)) continue;
    // Probe this interior interval densely enough for mm-scale tolerances.
    int samples = 16;
    for (int k = 0; k <= samples; ++k) {
      double t = ts[i] + (ts[i + 1] - ts[i]) * (double(k) / samples);
      Vec2 p = s.a + d * t;
      depth = std::max(depth, point_depth_in_polygon(p, poly));
    }
  }
  depth = std::max(depth, point_depth_in_polygon(s.a, poly));
  depth = std::max(depth, point_depth_in_polygon(s.b, poly));
  return depth;
}

Aabb bounds_of(const std::vector<Vec2>& pts) {
  Aabb b;
  for (const auto& p : pts) b.grow(p);
  return b;
}

const char* contact_kind_name(ContactKind k) {
  switch (k) {
    case ContactKind::ObjVertexOnEnvEdge: return "obj_vertex_on_env_edge";
    case ContactKind::ObjEdgeOnEnvVertex: return "obj_edge_on_env_vertex";
    case ContactKind::ObjEdgeOnEnvEdge: return "obj_edge_on_env_edge";
    case ContactKind::FingerOnObjEdge: return "finger_on_obj_edge";
    case ContactKind::FingerOnObjVertex: return "finger_on_obj_vertex";
  }
  return "?";
}

}  // namespace ldhp

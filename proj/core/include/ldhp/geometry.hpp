#pragma once
// Planar geometry kernel: SE(2) poses, polygon/polyline queries, contact
// detection. Units are millimetres and radians throughout.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ldhp {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double norm2(const Vec2& v) { return v.x * v.x + v.y * v.y; }
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }  // +90 deg
inline Vec2 normalized(const Vec2& v) {
  double n = norm(v);
  return n > 0 ? Vec2{v.x / n, v.y / n} : Vec2{0, 0};
}
inline Vec2 rotated(const Vec2& v, double a) {
  double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
inline double angle_of(const Vec2& v) { return std::atan2(v.y, v.x); }

// Wrap to (-pi, pi].
double wrap_angle(double a);

// SE(2) pose: rotate by theta, then translate by (x, y).
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double t_) : x(x_), y(y_), theta(wrap_angle(t_)) {}

  Vec2 apply(const Vec2& p) const { return rotated(p, theta) + Vec2{x, y}; }
  Vec2 apply_dir(const Vec2& d) const { return rotated(d, theta); }
  Vec2 invert(const Vec2& p) const { return rotated(p - Vec2{x, y}, -theta); }
  Vec2 translation() const { return {x, y}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
  }
};

inline bool pose_close(const Pose2& a, const Pose2& b, double lin_tol, double ang_tol) {
  return std::abs(a.x - b.x) <= lin_tol && std::abs(a.y - b.y) <= lin_tol &&
         std::abs(wrap_angle(a.theta - b.theta)) <= ang_tol;
}

std::vector<Vec2> transform_points(const std::vector<Vec2>& pts, const Pose2& pose);

struct Segment {
  Vec2 a, b;
  Vec2 dir() const { return normalized(b - a); }
  double length() const { return norm(b - a); }
};

double dist_point_segment(const Vec2& p, const Segment& s);
Vec2 closest_point_segment(const Vec2& p, const Segment& s);
double dist_segment_segment(const Segment& s, const Segment& t);
bool segments_intersect(const Segment& s, const Segment& t);

// --- polygon queries (vertex list in CCW order) ---

bool polygon_is_ccw(const std::vector<Vec2>& poly);
bool polygon_is_simple(const std::vector<Vec2>& poly);
double polygon_area(const std::vector<Vec2>& poly);
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);
// Distance from p to the polygon boundary (>= 0 regardless of side).
double dist_point_polygon_boundary(const Vec2& p, const std::vector<Vec2>& poly);
// Penetration depth of p into the polygon: 0 if outside, else distance to boundary.
double point_depth_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);
// Max penetration depth of segment s into the polygon (sampled on interior chords).
double segment_depth_in_polygon(const Segment& s, const std::vector<Vec2>& poly);

struct Aabb {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  void grow(const Vec2& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  double diag() const { return norm(hi - lo); }
};
Aabb bounds_of(const std::vector<Vec2>& pts);

// --- contacts ---

enum class ContactKind {
  ObjVertexOnEnvEdge,
  ObjEdgeOnEnvVertex,
  ObjEdgeOnEnvEdge,
  FingerOnObjEdge,
  FingerOnObjVertex,
};

const char* contact_kind_name(ContactKind k);

// Elementary contact. `normal` points out of the supporting body into the
// supported one (env -> object for object/env contacts, finger -> object for
// grasp contacts). Line contacts carry the overlap endpoints.
struct Contact {
  ContactKind kind = ContactKind::ObjVertexOnEnvEdge;
  int obj_feature = -1;
  int other_feature = -1;
  Vec2 point;
  Vec2 normal;
  bool line_contact = false;
  Vec2 line_p0, line_p1;  // valid when line_contact
};

}  // namespace ldhp

#include "ldhp/render.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ldhp {

namespace {

struct Mapper {
  double scale;
  Vec2 origin;  // world point mapped to canvas lower-left margin
  int h;
  Vec2 to_px(const Vec2& w) const {
    return {(w.x - origin.x) * scale + 20.0, h - 20.0 - (w.y - origin.y) * scale};
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

void poly_path(std::ostringstream& os, const std::vector<Vec2>& pts,
               const Mapper& map, bool closed, const char* style) {
  os << "<path d=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    Vec2 p = map.to_px(pts[i]);
    os << (i == 0 ? "M" : "L") << fmt(p.x) << " " << fmt(p.y) << " ";
  }
  if (closed) os << "Z";
  os << "\" " << style << "/>\n";
}

void draw_fingers(std::ostringstream& os, const GraspRealization& r,
                  const Mapper& map) {
  for (const auto& f : r.fingers) {
    if (f.type == FingerShape::Type::Capsule) {
      Vec2 a = map.to_px(f.seg.a), b = map.to_px(f.seg.b);
      os << "<line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y) << "\" x2=\""
         << fmt(b.x) << "\" y2=\"" << fmt(b.y)
         << "\" stroke=\"#c0392b\" stroke-width=\""
         << fmt(std::max(1.0, 2.0 * f.radius * map.scale))
         << "\" stroke-linecap=\"round\"/>\n";
    } else {
      poly_path(os, f.box_corners(), map, true,
                "fill=\"#c0392b\" fill-opacity=\"0.8\"");
    }
  }
}

}  // namespace

int render_plan(const Plan& plan, const Scene& scene, const PlannerConfig& cfg,
                const RenderSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.out_dir);

  // Fit: bounds over env and the start/end poses.
  Aabb bb = bounds_of(scene.env.vertices);
  for (const auto& st : plan.steps) {
    for (const auto& p : transform_points(scene.object.vertices, st.start_pose))
      bb.grow(p);
    for (const auto& p : transform_points(scene.object.vertices, st.end_pose))
      bb.grow(p);
  }
  double scale = spec.scale;
  if (scale <= 0) {
    double sx = (spec.canvas_w - 40.0) / std::max(1.0, bb.hi.x - bb.lo.x);
    double sy = (spec.canvas_h - 40.0) / std::max(1.0, bb.hi.y - bb.lo.y);
    scale = std::min(sx, sy);
  }
  Mapper map{scale, bb.lo, spec.canvas_h};

  int frame = 0, written = 0;
  auto emit = [&](const Pose2& pose, const Grasp& grasp, const std::string& note) {
    if (frame++ % spec.stride != 0) return;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.canvas_w
       << "\" height=\"" << spec.canvas_h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (spec.layer_env)
      poly_path(os, scene.env.vertices, map, false,
                "fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"2\"");
    if (spec.layer_object)
      poly_path(os, transform_points(scene.object.vertices, pose), map, true,
                "fill=\"#3498db\" fill-opacity=\"0.55\" stroke=\"#1f618d\"");
    if (spec.layer_com) {
      Vec2 c = map.to_px(pose.apply(scene.object.com));
      os << "<circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y)
         << "\" r=\"3\" fill=\"#111\"/>\n";
    }
    if (spec.layer_gripper && grasp.is_pair()) {
      auto r = realize(grasp, scene.object, scene.gripper, pose);
      draw_fingers(os, r, map);
    }
    if (spec.layer_contacts) {
      for (const auto& c :
           detect_contacts(scene.object, pose, scene.env, cfg.contact_eps,
                           cfg.angle_eps)) {
        Vec2 p = map.to_px(c.point);
        os << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y)
           << "\" r=\"3\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"/>\n";
        if (spec.layer_cones) {
          double mu = scene.friction.mu_env;
          auto [l, rr] = friction_cone(c.normal, mu);
          for (const Vec2& ray : {l, rr}) {
            Vec2 q = map.to_px(c.point + ray * 15.0);
            os << "<line x1=\"" << fmt(p.x) << "\" y1=\"" << fmt(p.y) << "\" x2=\""
               << fmt(q.x) << "\" y2=\"" << fmt(q.y)
               << "\" stroke=\"#27ae60\" stroke-width=\"1\"/>\n";
          }
        }
      }
    }
    os << "<text x=\"8\" y=\"14\" font-size=\"11\" font-family=\"monospace\">"
       << note << "</text>\n";
    os << "</svg>\n";
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04d.svg", ++written);
    std::ofstream out(fs::path(spec.out_dir) / name);
    out << os.str();
  };

  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& st = plan.steps[i];
    std::string note = std::to_string(i) + " " +
                       primitive_kind_name(st.primitive.kind);
    if (st.kind == StepKind::MoveStep) {
      auto poses = discretize_move(st.primitive, st.start_pose, scene,
                                   spec.move_samples);
      for (const auto& p : poses) emit(p, st.grasp_before, note);
    } else {
      // Adjust steps hold the pose; interpolate the grasp where meaningful.
      for (int k = 0; k <= spec.adjust_samples; ++k) {
        const Grasp& g = (k < spec.adjust_samples / 2) ? st.grasp_before
                                                       : st.grasp_after;
        emit(st.start_pose, g, note);
      }
    }
  }
  return written;
}

}  // namespace ldhp

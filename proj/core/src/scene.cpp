#include "ldhp/scene.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ldhp/contact.hpp"

namespace ldhp {

using json = nlohmann::ordered_json;

std::vector<Violation> validate_scene(const Scene& s, double contact_eps) {
  std::vector<Violation> out;
  const auto& poly = s.object.vertices;
  if (poly.size() < 3) {
    out.push_back({"object.vertices", "at least 3 vertices required"});
    return out;
  }
  for (const auto& v : poly)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      out.push_back({"object.vertices", "non-finite coordinate"});
      return out;
    }
  if (!polygon_is_simple(poly))
    out.push_back({"object.vertices", "polygon must be simple"});
  else if (!polygon_is_ccw(poly))
    out.push_back({"object.vertices", "vertex order must be counter-clockwise"});
  else if (point_depth_in_polygon(s.object.com, poly) <= 0.0)
    out.push_back({"object.com", "com not interior"});
  if (s.object.mass_scale <= 0 || !std::isfinite(s.object.mass_scale))
    out.push_back({"object.mass_scale", "must be positive and finite"});

  if (s.env.vertices.size() < 2) {
    out.push_back({"env.vertices", "at least 2 vertices required"});
  } else {
    for (int j = 0; j < s.env.num_edges(); ++j)
      if (s.env.edge(j).length() <= 1e-9) {
        out.push_back({"env.vertices", "consecutive vertices must be distinct"});
        break;
      }
    for (int i = 0; i < s.env.num_edges(); ++i)
      for (int j = i + 2; j < s.env.num_edges(); ++j)
        if (segments_intersect(s.env.edge(i), s.env.edge(j))) {
          out.push_back({"env.vertices", "polyline must not self-intersect"});
          i = s.env.num_edges();
          break;
        }
  }

  const auto& g = s.gripper;
  if (g.variant == GripperVariant::ConfigI) {
    if (!(g.finger_spacing > 2.0 * g.finger_radius) || !(g.finger_radius >= 0))
      out.push_back({"gripper", "ConfigI requires finger_spacing > 2*finger_radius >= 0"});
  } else {
    if (!(0.0 <= g.opening_min && g.opening_min < g.opening_max))
      out.push_back({"gripper", "ConfigII requires 0 <= opening_min < opening_max"});
    if (g.pad_width <= 0 || g.pad_length <= 0)
      out.push_back({"gripper", "ConfigII pad dimensions must be positive"});
  }

  if (s.friction.mu_env < 0 || !std::isfinite(s.friction.mu_env))
    out.push_back({"friction.mu_env", "must be >= 0 and finite"});
  if (s.friction.mu_grip < 0 || !std::isfinite(s.friction.mu_grip))
    out.push_back({"friction.mu_grip", "must be >= 0 and finite"});
  for (const auto& [k, v] : s.friction.overrides) {
    if (k < 0 || k >= s.env.num_edges())
      out.push_back({"friction.overrides", "edge index out of range"});
    if (v < 0 || !std::isfinite(v))
      out.push_back({"friction.overrides", "must be >= 0 and finite"});
  }

  if (!s.t0.finite()) out.push_back({"t0", "must be finite"});
  if (!s.tg.finite()) out.push_back({"tg", "must be finite"});
  if (std::abs(norm(s.gravity_dir) - 1.0) > 1e-6)
    out.push_back({"gravity_dir", "must be a unit vector"});

  if (out.empty()) {
    if (collides(s.object, s.t0, s.env, contact_eps))
      out.push_back({"t0", "object at t0 penetrates env beyond tolerance"});
    if (collides(s.object, s.tg, s.env, contact_eps))
      out.push_back({"tg", "object at tg penetrates env beyond tolerance"});
  }
  return out;
}

namespace {

Vec2 vec_from(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(std::string(field) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Pose2 pose_from(const json& j, const char* field) {
  if (!j.contains("x") || !j.contains("y") || !j.contains("theta"))
    throw ParseError(std::string(field) + ": expected {x, y, theta}");
  return Pose2(j["x"].get<double>(), j["y"].get<double>(), j["theta"].get<double>());
}

json pose_to(const Pose2& p) {
  return json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

}  // namespace

Scene scene_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("ldhp_scene") || j["ldhp_scene"].get<int>() != 1)
    throw ParseError("missing or unsupported ldhp_scene version");

  Scene s;
  try {
    s.name = j.value("name", std::string());
    const auto& jo = j.at("object");
    for (const auto& v : jo.at("vertices")) s.object.vertices.push_back(vec_from(v, "object.vertices"));
    s.object.com = vec_from(jo.at("com"), "object.com");
    s.object.mass_scale = jo.value("mass_scale", 1.0);

    for (const auto& v : j.at("env").at("vertices"))
      s.env.vertices.push_back(vec_from(v, "env.vertices"));

    const auto& jg = j.at("gripper");
    std::string cfg = jg.at("config").get<std::string>();
    if (cfg == "I") {
      s.gripper.variant = GripperVariant::ConfigI;
      s.gripper.finger_radius = jg.at("finger_radius").get<double>();
      s.gripper.finger_spacing = jg.at("finger_spacing").get<double>();
    } else if (cfg == "II") {
      s.gripper.variant = GripperVariant::ConfigII;
      s.gripper.pad_width = jg.at("pad_width").get<double>();
      s.gripper.pad_length = jg.at("pad_length").get<double>();
      s.gripper.opening_min = jg.at("opening_min").get<double>();
      s.gripper.opening_max = jg.at("opening_max").get<double>();
    } else {
      throw ParseError("gripper.config must be \"I\" or \"II\"");
    }
    s.gripper.shank_length = jg.value("shank_length", 35.0);

    s.t0 = pose_from(j.at("t0"), "t0");
    s.tg = pose_from(j.at("tg"), "tg");

    const auto& jf = j.at("friction");
    s.friction.mu_env = jf.at("mu_env").get<double>();
    s.friction.mu_grip = jf.at("mu_grip").get<double>();
    if (jf.contains("overrides"))
      for (auto it = jf["overrides"].begin(); it != jf["overrides"].end(); ++it)
        s.friction.overrides[std::stoi(it.key())] = it.value().get<double>();

    if (j.contains("gravity_dir")) s.gravity_dir = vec_from(j["gravity_dir"], "gravity_dir");
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("scene schema error: ") + e.what());
  }

  auto violations = validate_scene(s);
  if (!violations.empty())
    throw ValidationError(violations.front().field + ": " + violations.front().rule);
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json_text(ss.str());
}

std::string scene_to_json_text(const Scene& s) {
  json j;
  j["ldhp_scene"] = 1;
  if (!s.name.empty()) j["name"] = s.name;
  json verts = json::array();
  for (const auto& v : s.object.vertices) verts.push_back({v.x, v.y});
  j["object"] = {{"vertices", verts}, {"com", {s.object.com.x, s.object.com.y}},
                 {"mass_scale", s.object.mass_scale}};
  json ev = json::array();
  for (const auto& v : s.env.vertices) ev.push_back({v.x, v.y});
  j["env"] = {{"vertices", ev}};
  if (s.gripper.variant == GripperVariant::ConfigI) {
    j["gripper"] = {{"config", "I"},
                    {"finger_radius", s.gripper.finger_radius},
                    {"finger_spacing", s.gripper.finger_spacing},
                    {"shank_length", s.gripper.shank_length}};
  } else {
    j["gripper"] = {{"config", "II"},
                    {"pad_width", s.gripper.pad_width},
                    {"pad_length", s.gripper.pad_length},
                    {"opening_min", s.gripper.opening_min},
                    {"opening_max", s.gripper.opening_max},
                    {"shank_length", s.gripper.shank_length}};
  }
  j["t0"] = pose_to(s.t0);
  j["tg"] = pose_to(s.tg);
  json ov = json::object();
  for (const auto& [k, v] : s.friction.overrides) ov[std::to_string(k)] = v;
  j["friction"] = {{"mu_env", s.friction.mu_env}, {"mu_grip", s.friction.mu_grip},
                   {"overrides", ov}};
  j["gravity_dir"] = {s.gravity_dir.x, s.gravity_dir.y};
  return j.dump(2) + "\n";
}

void save_scene(const Scene& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scene file: " + path);
  out << scene_to_json_text(s);
}

PlannerConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  PlannerConfig c;
  c.k_samples = j.value("k_samples", c.k_samples);
  c.j_steps = j.value("j_steps", c.j_steps);
  c.h_max = j.value("h_max", c.h_max);
  c.l_max = j.value("l_max", c.l_max);
  c.w1 = j.value("w1", c.w1);
  c.w2 = j.value("w2", c.w2);
  c.lambda1 = j.value("lambda1", c.lambda1);
  c.lambda2 = j.value("lambda2", c.lambda2);
  c.contact_eps = j.value("contact_eps", c.contact_eps);
  c.angle_eps = j.value("angle_eps", c.angle_eps);
  c.seed = j.value("seed", c.seed);
  c.top_tier_samples = j.value("top_tier_samples", c.top_tier_samples);
  if (j.contains("disabled_primitives"))
    for (const auto& p : j["disabled_primitives"])
      c.disabled_primitives.insert(p.get<std::string>());
  if (c.k_samples <= 0 || c.j_steps <= 0 || c.h_max <= 0 || c.l_max <= 0 ||
      c.contact_eps <= 0 || c.angle_eps <= 0 || c.top_tier_samples <= 0 ||
      c.w1 < 0 || c.w2 < 0 || c.lambda1 < 0 || c.lambda2 < 0)
    throw ValidationError("config: counts and tolerances must be positive, weights >= 0");
  return c;
}

PlannerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

uint64_t scene_digest(const Scene& s) {
  std::string text = scene_to_json_text(s);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ldhp

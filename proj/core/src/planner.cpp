#include "ldhp/planner.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace ldhp {

using json = nlohmann::ordered_json;

namespace {

struct AssemblyInput {
  PosePath path;
  std::vector<std::vector<IntraRoute>> intra;  // ordered routes per layer
  double cost = 0.0;
};

Plan assemble_plan(const Scene& scene, const AssemblyInput& in) {
  Plan plan;
  plan.scene_digest = scene_digest(scene);
  plan.total_cost = in.cost;
  Grasp cur = Grasp::none();
  int n = in.path.segments();
  for (int k = 0; k <= n; ++k) {
    for (const auto& route : in.intra[k]) {
      Grasp before = cur;
      for (size_t i = 0; i < route.seq.size(); ++i) {
        PlanStep st;
        st.kind = StepKind::AdjustStep;
        st.primitive = route.seq[i];
        st.start_pose = st.end_pose = in.path.poses[k];
        st.grasp_before = before;
        st.grasp_after = route.states[i];
        st.label_before = st.label_after = in.path.labels[k];
        plan.steps.push_back(st);
        before = route.states[i];
      }
      cur = before;
    }
    if (k == n) break;
    PlanStep st;
    st.kind = StepKind::MoveStep;
    st.primitive = in.path.moves[k];
    st.start_pose = in.path.poses[k];
    st.end_pose = in.path.poses[k + 1];
    st.grasp_before = cur;
    st.grasp_after = cur;
    st.label_before = in.path.labels[k];
    st.label_after = in.path.labels[k + 1];
    plan.steps.push_back(st);
  }
  return plan;
}

}  // namespace

PlanOutcome ldhp_plan(const Scene& scene, const PlannerConfig& cfg,
                      const InterReweight& reweight) {
  auto t_start = std::chrono::steady_clock::now();
  PlanOutcome out;
  GraspCache cache;
  ContactGraph cg = build_contact_graph(scene, cfg);

  int total_refinements = 0;
  for (int attempt = 0; attempt < cfg.h_max; ++attempt) {
    PosePath path;
    try {
      path = plan_pose_path(scene, cfg, attempt);
    } catch (const std::exception& e) {
      out.failure.attempts.push_back({attempt, "top", e.what(), -1, ""});
      continue;
    }

    std::vector<int> orig(path.segments());
    std::iota(orig.begin(), orig.end(), 0);
    std::map<int, int> refines;
    int attempt_refines = 0;

    for (;;) {
      auto res = plan_grasps(scene, cfg, cache, path, reweight);
      if (res.ok) {
        AssemblyInput in;
        in.path = path;
        in.cost = res.plan.cost;
        in.intra = res.plan.intra;
        Plan plan = assemble_plan(scene, in);
        // Soundness gate: the emitted plan must survive the independent
        // verifier; discretization misses send the search back instead of
        // shipping an unsound plan.
        auto ver = verify_plan(plan, scene, cfg);
        if (!ver.clean()) {
          out.failure.attempts.push_back(
              {attempt, "bottom",
               "assembled plan failed verification: " + ver.violations.front().rule,
               res.fail_segment, ""});
          total_refinements += attempt_refines;
          break;
        }
        plan.stats.attempts = attempt + 1;
        plan.stats.refinements = total_refinements + attempt_refines;
        plan.stats.contact_nodes = static_cast<int>(cg.nodes.size());
        plan.stats.contact_edges = static_cast<int>(cg.edges.size());
        plan.stats.grasp_nodes = res.node_count;
        plan.stats.gt_sizes = res.gt_sizes;
        plan.stats.gm_sizes = res.gm_sizes;
        plan.stats.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                .count();
        out.plan = std::move(plan);
        return out;
      }

      int k = res.fail_segment;
      if (k < 0) k = 0;
      PrimitiveKind kind = path.moves.empty() ? PrimitiveKind::AirMove
                                              : path.moves[std::min<size_t>(
                                                    k, path.moves.size() - 1)].kind;
      bool sensitive = kind == PrimitiveKind::Tip ||
                       kind == PrimitiveKind::BiplanarSlide;
      int o = orig.empty() ? 0 : orig[std::min<size_t>(k, orig.size() - 1)];
      if (sensitive && refines[o] < cfg.l_max) {
        auto [m1, m2] = bisect_move(path.moves[k]);
        Pose2 mid = apply_move(m1, path.poses[k], scene);
        path.moves[k] = m1;
        path.moves.insert(path.moves.begin() + k + 1, m2);
        path.poses.insert(path.poses.begin() + k + 1, mid);
        path.labels.insert(path.labels.begin() + k + 1, path.labels[k + 1]);
        orig.insert(orig.begin() + k + 1, o);
        refines[o]++;
        attempt_refines++;
        continue;
      }
      out.failure.attempts.push_back(
          {attempt, "bottom", res.fail_reason, k, primitive_kind_name(kind)});
      total_refinements += attempt_refines;
      break;
    }
  }
  return out;
}

VerificationReport verify_plan(const Plan& plan, const Scene& scene,
                               const PlannerConfig& cfg) {
  VerificationReport rep;
  PlannerConfig vcfg = cfg;
  vcfg.j_steps = cfg.j_steps * 2;

  int first_move = -1, last_move = -1;
  for (size_t i = 0; i < plan.steps.size(); ++i)
    if (plan.steps[i].kind == StepKind::MoveStep) {
      if (first_move < 0) first_move = static_cast<int>(i);
      last_move = static_cast<int>(i);
    }

  Pose2 pose = plan.steps.empty() ? scene.t0 : plan.steps.front().start_pose;
  Grasp grasp = Grasp::none();
  if (!plan.steps.empty() &&
      !pose_close(plan.steps.front().start_pose, scene.t0, 1e-6, 1e-9))
    rep.violations.push_back({0, -1, "plan does not start at t0"});

  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& st = plan.steps[i];
    if (!pose_close(st.start_pose, pose, 1e-6, 1e-9))
      rep.violations.push_back({static_cast<int>(i), -1, "pose chain broken"});
    if (grasp_key(st.grasp_before) != grasp_key(grasp))
      rep.violations.push_back({static_cast<int>(i), -1, "grasp chain broken"});

    if (st.kind == StepKind::MoveStep) {
      if (grasp_key(st.grasp_after) != grasp_key(st.grasp_before))
        rep.violations.push_back({static_cast<int>(i), -1,
                                  "move step must preserve the grasp"});
      const Grasp* gp = st.grasp_before.is_pair() ? &st.grasp_before : nullptr;
      auto fr = move_feasible(st.primitive, st.start_pose, scene, gp, vcfg);
      if (!fr.feasible)
        rep.violations.push_back({static_cast<int>(i), fr.fail_sample,
                                  "move infeasible: " + fr.reason});
      Pose2 end = apply_move(st.primitive, st.start_pose, scene);
      if (!pose_close(end, st.end_pose, 1e-6, 1e-9))
        rep.violations.push_back({static_cast<int>(i), -1,
                                  "end pose mismatch with the transformer"});
      pose = st.end_pose;
    } else {
      if (!pose_close(st.end_pose, st.start_pose, 1e-9, 1e-12))
        rep.violations.push_back({static_cast<int>(i), -1,
                                  "adjust step must preserve the pose"});
      bool exempt = (first_move < 0) || static_cast<int>(i) < first_move ||
                    static_cast<int>(i) > last_move;
      auto ar = adjust_feasible(st.primitive, st.grasp_before, st.start_pose, scene,
                                vcfg, !exempt);
      if (!ar.feasible)
        rep.violations.push_back({static_cast<int>(i), ar.fail_sample,
                                  "adjust infeasible: " + ar.reason});
      try {
        Grasp g2 = apply_adjust(st.primitive, st.grasp_before, st.start_pose, scene,
                                vcfg);
        if (!grasps_match(g2, st.grasp_after, scene.object,
                          vcfg.seat_tol(scene.object)))
          rep.violations.push_back({static_cast<int>(i), -1,
                                    "grasp mismatch with the transformer"});
      } catch (const std::exception& e) {
        rep.violations.push_back({static_cast<int>(i), -1,
                                  std::string("adjust precondition: ") + e.what()});
      }
      grasp = st.grasp_after;
    }

    // Rest stability whenever the object dwells without a grasp at an
    // interior layer.
    bool interior = first_move >= 0 && static_cast<int>(i) > first_move &&
                    static_cast<int>(i) < last_move;
    if (interior && !grasp.is_pair() && !st.grasp_before.is_pair()) {
      if (!rests_stably(scene, pose, vcfg))
        rep.violations.push_back({static_cast<int>(i), -1,
                                  "object not at rest while ungrasped"});
    }
  }
  if (!plan.steps.empty() &&
      !pose_close(plan.steps.back().end_pose, scene.tg, 1e-6, 1e-9))
    rep.violations.push_back({static_cast<int>(plan.steps.size()) - 1, -1,
                              "plan does not end at tg"});
  return rep;
}

PlanOutcome ablate(const Scene& scene, const PlannerConfig& cfg,
                   const std::string& removed_kind) {
  PlannerConfig c2 = cfg;
  c2.disabled_primitives.insert(removed_kind);
  return ldhp_plan(scene, c2);
}

// --- JSON ---

namespace {

json pose_to_json(const Pose2& p) {
  return json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}
Pose2 pose_from_json(const json& j) {
  return Pose2(j.at("x").get<double>(), j.at("y").get<double>(),
               j.at("theta").get<double>());
}

json grasp_to_json(const Grasp& g) {
  if (!g.is_pair()) return json{{"family", "none"}};
  return json{{"family", g.family == GraspFamily::Pinch ? "pinch" : "press"},
              {"a", {{"edge", g.a.edge}, {"s", g.a.s}}},
              {"b", {{"edge", g.b.edge}, {"s", g.b.s}}},
              {"sigma", g.sigma}};
}
Grasp grasp_from_json(const json& j) {
  Grasp g;
  std::string fam = j.at("family").get<std::string>();
  if (fam == "none") return g;
  g.family = fam == "pinch" ? GraspFamily::Pinch : GraspFamily::Press;
  g.a = {j.at("a").at("edge").get<int>(), j.at("a").at("s").get<double>()};
  g.b = {j.at("b").at("edge").get<int>(), j.at("b").at("s").get<double>()};
  g.sigma = j.at("sigma").get<int>();
  return g;
}

json primitive_to_json(const PrimitiveInstance& m) {
  json j;
  j["kind"] = primitive_kind_name(m.kind);
  switch (m.kind) {
    case PrimitiveKind::Tip:
      j["pivot"] = {m.tip.pivot.x, m.tip.pivot.y};
      j["angle"] = m.tip.angle;
      j["obj_vertex"] = m.tip.obj_vertex;
      j["env_edge"] = m.tip.env_edge;
      break;
    case PrimitiveKind::Push:
      j["env_edge"] = m.push.env_edge;
      j["travel"] = m.push.travel;
      j["obj_edge"] = m.push.obj_edge;
      break;
    case PrimitiveKind::BiplanarSlide:
      j["obj_vertex"] = m.biplanar.obj_vertex;
      j["obj_edge"] = m.biplanar.obj_edge;
      j["env_edge_p"] = m.biplanar.env_edge_p;
      j["env_edge_q"] = m.biplanar.env_edge_q;
      j["theta_start"] = m.biplanar.theta_start;
      j["theta_end"] = m.biplanar.theta_end;
      break;
    case PrimitiveKind::AirMove: {
      auto arr = json::array();
      for (const auto& w : m.air.waypoints) arr.push_back(pose_to_json(w));
      j["waypoints"] = arr;
      break;
    }
    case PrimitiveKind::Open:
      j["dw"] = m.open.dw;
      break;
    case PrimitiveKind::Close:
      j["dw"] = m.close.dw;
      break;
    case PrimitiveKind::Pivot:
      j["finger"] = m.pivot.finger;
      j["angle"] = m.pivot.angle;
      break;
    case PrimitiveKind::Slide:
      j["finger"] = m.slide.finger;
      j["darc"] = m.slide.darc;
      break;
    case PrimitiveKind::Flip:
      j["sense"] = m.flip.sense;
      break;
    case PrimitiveKind::ApproachContact:
      j["target"] = grasp_to_json(m.approach.target);
      j["standoff"] = m.approach.standoff;
      break;
  }
  return j;
}

PrimitiveInstance primitive_from_json(const json& j) {
  PrimitiveInstance m;
  m.kind = primitive_kind_from_name(j.at("kind").get<std::string>());
  switch (m.kind) {
    case PrimitiveKind::Tip:
      m.tip.pivot = {j.at("pivot")[0].get<double>(), j.at("pivot")[1].get<double>()};
      m.tip.angle = j.at("angle").get<double>();
      m.tip.obj_vertex = j.at("obj_vertex").get<int>();
      m.tip.env_edge = j.at("env_edge").get<int>();
      break;
    case PrimitiveKind::Push:
      m.push.env_edge = j.at("env_edge").get<int>();
      m.push.travel = j.at("travel").get<double>();
      m.push.obj_edge = j.at("obj_edge").get<int>();
      break;
    case PrimitiveKind::BiplanarSlide:
      m.biplanar.obj_vertex = j.at("obj_vertex").get<int>();
      m.biplanar.obj_edge = j.at("obj_edge").get<int>();
      m.biplanar.env_edge_p = j.at("env_edge_p").get<int>();
      m.biplanar.env_edge_q = j.at("env_edge_q").get<int>();
      m.biplanar.theta_start = j.at("theta_start").get<double>();
      m.biplanar.theta_end = j.at("theta_end").get<double>();
      break;
    case PrimitiveKind::AirMove:
      for (const auto& w : j.at("waypoints")) m.air.waypoints.push_back(pose_from_json(w));
      break;
    case PrimitiveKind::Open:
      m.open.dw = j.at("dw").get<double>();
      break;
    case PrimitiveKind::Close:
      m.close.dw = j.at("dw").get<double>();
      break;
    case PrimitiveKind::Pivot:
      m.pivot.finger = j.at("finger").get<int>();
      m.pivot.angle = j.at("angle").get<double>();
      break;
    case PrimitiveKind::Slide:
      m.slide.finger = j.at("finger").get<int>();
      m.slide.darc = j.at("darc").get<double>();
      break;
    case PrimitiveKind::Flip:
      m.flip.sense = j.at("sense").get<int>();
      break;
    case PrimitiveKind::ApproachContact:
      m.approach.target = grasp_from_json(j.at("target"));
      m.approach.standoff = j.at("standoff").get<double>();
      break;
  }
  return m;
}

}  // namespace

std::string plan_to_json(const Plan& plan) {
  json j;
  j["ldhp_plan"] = 1;
  j["scene_digest"] = plan.scene_digest;
  j["total_cost"] = plan.total_cost;
  auto steps = json::array();
  for (const auto& st : plan.steps) {
    json s;
    s["type"] = st.kind == StepKind::MoveStep ? "move" : "adjust";
    s["primitive"] = primitive_to_json(st.primitive);
    s["start_pose"] = pose_to_json(st.start_pose);
    s["end_pose"] = pose_to_json(st.end_pose);
    s["grasp_before"] = grasp_to_json(st.grasp_before);
    s["grasp_after"] = grasp_to_json(st.grasp_after);
    s["label_before"] = st.label_before;
    s["label_after"] = st.label_after;
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["stats"] = {{"attempts", plan.stats.attempts},
                {"refinements", plan.stats.refinements},
                {"contact_nodes", plan.stats.contact_nodes},
                {"contact_edges", plan.stats.contact_edges},
                {"grasp_nodes", plan.stats.grasp_nodes},
                {"gt_sizes", plan.stats.gt_sizes},
                {"gm_sizes", plan.stats.gm_sizes}};
  return j.dump(2) + "\n";
}

std::string failure_to_json(const PlanFailure& f) {
  json j;
  j["ldhp_plan"] = 1;
  j["failure"] = true;
  auto arr = json::array();
  for (const auto& a : f.attempts)
    arr.push_back({{"attempt", a.attempt},
                   {"stage", a.stage},
                   {"reason", a.reason},
                   {"fail_segment", a.fail_segment},
                   {"fail_kind", a.fail_kind}});
  j["attempts"] = arr;
  return j.dump(2) + "\n";
}

Plan plan_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("ldhp_plan") || j.contains("failure"))
    throw ParseError("not a plan JSON");
  Plan plan;
  plan.scene_digest = j.at("scene_digest").get<uint64_t>();
  plan.total_cost = j.at("total_cost").get<double>();
  for (const auto& s : j.at("steps")) {
    PlanStep st;
    st.kind = s.at("type").get<std::string>() == "move" ? StepKind::MoveStep
                                                        : StepKind::AdjustStep;
    st.primitive = primitive_from_json(s.at("primitive"));
    st.start_pose = pose_from_json(s.at("start_pose"));
    st.end_pose = pose_from_json(s.at("end_pose"));
    st.grasp_before = grasp_from_json(s.at("grasp_before"));
    st.grasp_after = grasp_from_json(s.at("grasp_after"));
    st.label_before = s.at("label_before").get<std::string>();
    st.label_after = s.at("label_after").get<std::string>();
    plan.steps.push_back(st);
  }
  if (j.contains("stats")) {
    plan.stats.attempts = j["stats"].value("attempts", 0);
    plan.stats.refinements = j["stats"].value("refinements", 0);
    plan.stats.grasp_nodes = j["stats"].value("grasp_nodes", 0);
  }
  return plan;
}

}  // namespace ldhp

// ldhp: plan / verify / render / bench / ablate for planar non-prehensile
// manipulation scenes.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldhp/planner.hpp"
#include "ldhp/render.hpp"
#include "ldhp/scenes.hpp"

using namespace ldhp;
using json = nlohmann::ordered_json;

namespace {

int log_level() {
  const char* v = std::getenv("LDHP_LOG");
  if (!v) return 0;
  std::string s(v);
  if (s == "debug") return 2;
  if (s == "info") return 1;
  return 0;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct BenchOutcome {
  bool ok = true;
  json report;
};

bool plan_has_move(const Plan& p, PrimitiveKind k) {
  for (const auto& st : p.steps)
    if (st.primitive.kind == k) return true;
  return false;
}

bool plan_has_transition(const Plan& p, PrimitiveKind k, const std::string& from,
                         const std::string& to) {
  for (const auto& st : p.steps)
    if (st.kind == StepKind::MoveStep && st.primitive.kind == k &&
        st.label_before == from && st.label_after == to)
      return true;
  return false;
}

BenchOutcome run_bench(const std::string& task) {
  BenchOutcome out;
  Scene scene = bundled_scene(task);
  PlannerConfig cfg;
  auto t0 = std::chrono::steady_clock::now();
  auto cg = build_contact_graph(scene, cfg);
  auto outcome = ldhp_plan(scene, cfg);
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out.report["task"] = task;
  out.report["contact_states"] = cg.nodes.size();
  out.report["plan_found"] = outcome.ok();
  out.report["wall_time_s"] = secs;

  auto check = [&](const std::string& name, bool pass) {
    out.report["checks"][name] = pass;
    if (!pass) out.ok = false;
    std::cout << (pass ? "  [ok] " : "  [FAIL] ") << name << "\n";
  };

  check("plan found", outcome.ok());
  if (outcome.ok()) {
    const Plan& p = *outcome.plan;
    out.report["steps"] = p.steps.size();
    out.report["total_cost"] = p.total_cost;
    out.report["attempts"] = p.stats.attempts;
    out.report["refinements"] = p.stats.refinements;
    out.report["grasp_nodes"] = p.stats.grasp_nodes;
    auto v = verify_plan(p, scene, cfg);
    check("plan verifies", v.clean());
    if (task == "task1") {
      check("contact-state graph has 8 nodes", cg.nodes.size() == 8);
      check("plan tips l1e1 -> v2e1",
            plan_has_transition(p, PrimitiveKind::Tip, "l1e1", "v2e1"));
    } else if (task == "task2") {
      check("40 candidate contact states", cg.nodes.size() == 40);
      check("plan uses tip", plan_has_move(p, PrimitiveKind::Tip));
      check("plan uses push", plan_has_move(p, PrimitiveKind::Push));
      check("plan uses biplanar-slide",
            plan_has_move(p, PrimitiveKind::BiplanarSlide));
      check("plan flips in an intra-pose sequence",
            plan_has_move(p, PrimitiveKind::Flip));
    }
  } else {
    out.report["failure"] = json::parse(failure_to_json(outcome.failure));
  }
  return out;
}

const char* kAllKinds[10] = {"tip",    "push",  "biplanar-slide",
                             "air-move", "open", "close",
                             "pivot",  "slide", "flip",
                             "approach-contact"};

// Feasibility pattern reported in the source experiments (Y = plan exists
// after removing the row's primitive).
const bool kExpectTask1[10] = {false, false, false, false, false,
                               false, false, true,  false, false};
const bool kExpectTask2[10] = {true,  false, false, false, false,
                               true,  false, true,  false, true};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDHP: library-driven hierarchical planner for planar "
               "non-prehensile manipulation"};
  app.require_subcommand(1);

  // --- plan ---
  auto* cmd_plan = app.add_subcommand("plan", "plan a scene");
  std::string plan_scene, plan_out, plan_cfg, dump_graph, dump_grasp_graph;
  uint64_t seed = 0;
  cmd_plan->add_option("--scene", plan_scene)->required();
  cmd_plan->add_option("--out", plan_out)->required();
  cmd_plan->add_option("--config", plan_cfg);
  cmd_plan->add_option("--seed", seed);
  cmd_plan->add_option("--dump-graph", dump_graph);
  cmd_plan->add_option("--dump-grasp-graph", dump_grasp_graph);

  // --- verify ---
  auto* cmd_verify = app.add_subcommand("verify", "re-check a plan");
  std::string ver_scene, ver_plan;
  cmd_verify->add_option("--scene", ver_scene)->required();
  cmd_verify->add_option("--plan", ver_plan)->required();

  // --- render ---
  auto* cmd_render = app.add_subcommand("render", "render SVG frames");
  std::string ren_scene, ren_plan, ren_out;
  int stride = 1;
  cmd_render->add_option("--scene", ren_scene)->required();
  cmd_render->add_option("--plan", ren_plan)->required();
  cmd_render->add_option("--out", ren_out)->required();
  cmd_render->add_option("--stride", stride)->check(CLI::PositiveNumber);

  // --- bench ---
  auto* cmd_bench = app.add_subcommand("bench", "run a bundled benchmark scene");
  std::string bench_task, bench_report;
  cmd_bench->add_option("--task", bench_task)
      ->required()
      ->check(CLI::IsMember({"task1", "task2", "task1-inverse", "task2-inverse"}));
  cmd_bench->add_option("--report", bench_report);

  // --- ablate ---
  auto* cmd_ablate = app.add_subcommand("ablate", "primitive-removal study");
  std::string abl_task, abl_report;
  cmd_ablate->add_option("--task", abl_task)
      ->required()
      ->check(CLI::IsMember({"task1", "task2"}));
  cmd_ablate->add_option("--report", abl_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (cmd_plan->parsed()) {
      Scene scene = load_scene(plan_scene);
      PlannerConfig cfg;
      if (!plan_cfg.empty()) cfg = load_config(plan_cfg);
      if (cmd_plan->count("--seed")) cfg.seed = seed;
      auto t0 = std::chrono::steady_clock::now();
      auto outcome = ldhp_plan(scene, cfg);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  t0).count();
      if (!dump_graph.empty())
        write_file(dump_graph, contact_graph_to_json(build_contact_graph(scene, cfg)));
      if (!dump_grasp_graph.empty()) {
        GraspCache cache;
        try {
          PosePath path = plan_pose_path(scene, cfg, 0);
          auto res = plan_grasps(scene, cfg, cache, path);
          write_file(dump_grasp_graph,
                     grasp_graph_to_json(scene, cfg, cache, path, res));
        } catch (const std::exception& e) {
          write_file(dump_grasp_graph,
                     std::string("{\"error\": \"") + e.what() + "\"}\n");
        }
      }
      if (outcome.ok()) {
        write_file(plan_out, plan_to_json(*outcome.plan));
        std::cout << "plan: cost=" << outcome.plan->total_cost
                  << " steps=" << outcome.plan->steps.size()
                  << " attempts=" << outcome.plan->stats.attempts
                  << " wall=" << secs << "s\n";
        return 0;
      }
      write_file(plan_out, failure_to_json(outcome.failure));
      std::cout << "failure: no feasible plan after "
                << outcome.failure.attempts.size() << " attempts (wall=" << secs
                << "s)\n";
      return 2;
    }

    if (cmd_verify->parsed()) {
      Scene scene = load_scene(ver_scene);
      std::ifstream in(ver_plan);
      if (!in) throw ParseError("cannot open plan file: " + ver_plan);
      std::stringstream ss;
      ss << in.rdbuf();
      Plan plan = plan_from_json(ss.str());
      if (plan.scene_digest != scene_digest(scene))
        throw ParseError("plan/scene digest mismatch");
      PlannerConfig cfg;
      auto rep = verify_plan(plan, scene, cfg);
      for (const auto& v : rep.violations)
        std::cout << "violation: step " << v.step << " sample " << v.sample << ": "
                  << v.rule << "\n";
      std::cout << (rep.clean() ? "verified clean\n" : "verification failed\n");
      return rep.clean() ? 0 : 2;
    }

    if (cmd_render->parsed()) {
      Scene scene = load_scene(ren_scene);
      std::ifstream in(ren_plan);
      if (!in) throw ParseError("cannot open plan file: " + ren_plan);
      std::stringstream ss;
      ss << in.rdbuf();
      Plan plan = plan_from_json(ss.str());
      if (plan.scene_digest != scene_digest(scene))
        throw ParseError("plan/scene digest mismatch");
      PlannerConfig cfg;
      RenderSpec spec;
      spec.out_dir = ren_out;
      spec.stride = stride;
      spec.move_samples = cfg.j_steps;
      int n = render_plan(plan, scene, cfg, spec);
      std::cout << "wrote " << n << " frames to " << ren_out << "\n";
      return 0;
    }

    if (cmd_bench->parsed()) {
      std::cout << "bench " << bench_task << "\n";
      auto res = run_bench(bench_task);
      if (!bench_report.empty()) write_file(bench_report, res.report.dump(2) + "\n");
      return res.ok ? 0 : 2;
    }

    if (cmd_ablate->parsed()) {
      Scene scene = bundled_scene(abl_task);
      PlannerConfig cfg;
      const bool* expect = abl_task == "task1" ? kExpectTask1 : kExpectTask2;
      json rows = json::array();
      int matches = 0;
      std::cout << "ablation " << abl_task << " (Y = plan found)\n";
      for (int i = 0; i < 10; ++i) {
        auto outcome = ablate(scene, cfg, kAllKinds[i]);
        bool feasible = outcome.ok();
        bool match = feasible == expect[i];
        matches += match;
        std::printf("  %-17s %s  (reference %s)%s\n", kAllKinds[i],
                    feasible ? "Y" : "N", expect[i] ? "Y" : "N",
                    match ? "" : "  << mismatch");
        rows.push_back({{"primitive", kAllKinds[i]},
                        {"feasible", feasible},
                        {"reference", expect[i]},
                        {"match", match}});
      }
      std::cout << "matches: " << matches << "/10\n";
      if (!abl_report.empty()) {
        json rep;
        rep["task"] = abl_task;
        rep["rows"] = rows;
        rep["matches"] = matches;
        write_file(abl_report, rep.dump(2) + "\n");
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (log_level() > 1) std::cerr << "no subcommand handled\n";
  return 1;
}

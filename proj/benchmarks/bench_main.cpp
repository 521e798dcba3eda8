#include <benchmark/benchmark.h>

#include "ldhp/contact.hpp"
#include "ldhp/contact_graph.hpp"
#include "ldhp/grasp_graph.hpp"
#include "ldhp/scenes.hpp"

using namespace ldhp;

static void BM_Collides(benchmark::State& state) {
  Scene s = make_task2_scene();
  Pose2 pose(150, 20, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(collides(s.object, pose, s.env, 0.5));
}
BENCHMARK(BM_Collides);

static void BM_DetectContacts(benchmark::State& state) {
  Scene s = make_task1_scene();
  for (auto _ : state)
    benchmark::DoNotOptimize(detect_contacts(s.object, s.t0, s.env, 0.5));
}
BENCHMARK(BM_DetectContacts);

static void BM_Equilibrium(benchmark::State& state) {
  Scene s = make_task1_scene();
  PlannerConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(rests_stably(s, s.t0, cfg));
}
BENCHMARK(BM_Equilibrium);

static void BM_EnumerateStates(benchmark::State& state) {
  Scene s = make_task2_scene();
  PlannerConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_contact_states(s, cfg));
}
BENCHMARK(BM_EnumerateStates);

static void BM_EnumerateGrasps(benchmark::State& state) {
  Scene s = make_task2_scene();
  PlannerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_grasps(s, cfg));
}
BENCHMARK(BM_EnumerateGrasps);

BENCHMARK_MAIN();

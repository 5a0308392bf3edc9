// Serial vs OpenMP batch evaluation of the heavier residual kernels.

#include <benchmark/benchmark.h>

#include "algebroid/catalog.hpp"
#include "algebroid/induction.hpp"
#include "algebroid/parallel.hpp"
#include "algebroid/prolongation.hpp"
#include "algebroid/scenario.hpp"

using namespace algebroid;

namespace {

Exec mode(const benchmark::State& st) { return st.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

std::vector<WPoint> points(const std::string& name, std::int64_t count) {
  SamplingSpec s;
  s.points = static_cast<std::size_t>(count);
  return sample_points(catalog_entry(name).spec, s);
}

void BM_structure(benchmark::State& st) {
  const auto& a = catalog_entry("heisenberg-like").spec;
  const auto pts = points("heisenberg-like", st.range(0));
  set_default_exec(mode(st));
  for (auto _ : st) benchmark::DoNotOptimize(validate_structure(a, pts).max_residual());
  set_default_exec(Exec::Parallel);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_spray_connection(benchmark::State& st) {
  const auto& e = catalog_entry("submersion");
  const SprayField S = SprayField::canonical(e.spec, parse(e.lagrangian_E, VariableContext::full(1, 2)));
  const ConnectionField N = nlc_from_spray(S);
  const auto pts = points("submersion", st.range(0));
  for (auto _ : st) {
    auto r = map_points(pts, [&](const WPoint& p) { return prolong_curvature(e.spec, N, p).block("R").max_abs(); },
                        mode(st));
    benchmark::DoNotOptimize(r);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_case3(benchmark::State& st) {
  const auto& e = catalog_entry("submersion");
  const auto pts = points("submersion", st.range(0));
  const Expression L = parse(e.lagrangian_E, VariableContext::full(1, 2));
  set_default_exec(mode(st));
  for (auto _ : st) benchmark::DoNotOptimize(chern_lagrange_induction_suite(e.spec, L, pts).max_residual());
  set_default_exec(Exec::Parallel);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_trajectories(benchmark::State& st) {
  const auto& e = catalog_entry("twochart");
  const SprayField S = SprayField::canonical(e.spec, parse(e.lagrangian_E, VariableContext::full(1, 1)));
  const auto pts = points("twochart", st.range(0));
  for (auto _ : st) {
    auto r = map_points(pts, [&](const WPoint& p) { return integrate(S, p, 0.1, 1e-3).samples.size(); }, mode(st));
    benchmark::DoNotOptimize(r);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

// second argument: 0 serial, 1 OpenMP
BENCHMARK(BM_structure)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_spray_connection)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_case3)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_trajectories)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

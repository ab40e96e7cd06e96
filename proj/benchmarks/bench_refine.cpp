#include <benchmark/benchmark.h>

#include <numeric>

#include "ptcfem/mesh.hpp"

namespace {

void BM_UniformRefine(benchmark::State& state) {
  const auto mesh = ptcfem::build_initial_mesh(
      ptcfem::DomainSpec::square(0.0, 1.0), static_cast<int>(state.range(0)));
  std::vector<int> all(mesh.element_count());
  std::iota(all.begin(), all.end(), 0);
  for (auto _ : state) {
    auto refined = ptcfem::refine(mesh, all);
    benchmark::DoNotOptimize(refined.mesh.element_count());
  }
  state.SetItemsProcessed(state.iterations() * mesh.element_count());
}
BENCHMARK(BM_UniformRefine)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();

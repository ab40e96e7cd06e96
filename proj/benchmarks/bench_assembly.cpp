#include <benchmark/benchmark.h>

#include "ptcfem/estimator.hpp"
#include "ptcfem/fem.hpp"
#include "ptcfem/linear_solver.hpp"
#include "ptcfem/problems.hpp"

namespace {

ptcfem::Mesh make_mesh(int resolution) {
  return ptcfem::build_initial_mesh(ptcfem::DomainSpec::square(0.0, 1.0),
                                    resolution);
}

void BM_AssemblePtcSystem(benchmark::State& state) {
  const auto mesh = make_mesh(static_cast<int>(state.range(0)));
  const auto problem = ptcfem::builtin("sine-gordon", 1e-4);
  const auto u = ptcfem::FemFunction::from_initial_guess(mesh,
                                                         problem.initial_guess);
  for (auto _ : state) {
    auto system = ptcfem::assemble_ptc_system(mesh, u, 1.0, problem);
    benchmark::DoNotOptimize(system.rhs.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.element_count());
}
BENCHMARK(BM_AssemblePtcSystem)->Arg(16)->Arg(32)->Arg(64);

void BM_DirectSolve(benchmark::State& state) {
  const auto mesh = make_mesh(static_cast<int>(state.range(0)));
  const auto problem = ptcfem::builtin("sine-gordon", 1e-4);
  const auto u = ptcfem::FemFunction::from_initial_guess(mesh,
                                                         problem.initial_guess);
  const auto system = ptcfem::assemble_ptc_system(mesh, u, 1.0, problem);
  for (auto _ : state) {
    auto x = ptcfem::solve(system.matrix, system.rhs);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * system.dofs.count());
}
BENCHMARK(BM_DirectSolve)->Arg(16)->Arg(32)->Arg(64);

void BM_Estimator(benchmark::State& state) {
  const auto mesh = make_mesh(static_cast<int>(state.range(0)));
  const auto problem = ptcfem::builtin("sine-gordon", 1e-4);
  const auto u = ptcfem::FemFunction::from_initial_guess(mesh,
                                                         problem.initial_guess);
  const auto system = ptcfem::assemble_ptc_system(mesh, u, 1.0, problem);
  const auto delta = ptcfem::scatter_interior(
      ptcfem::solve(system.matrix, system.rhs), system.dofs, mesh);
  for (auto _ : state) {
    auto report = ptcfem::total_report(mesh, u, delta, 1.0, problem);
    benchmark::DoNotOptimize(report.total_estimator);
  }
  state.SetItemsProcessed(state.iterations() * mesh.element_count());
}
BENCHMARK(BM_Estimator)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

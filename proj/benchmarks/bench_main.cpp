// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "osm/fem/assembly.hpp"
#include "osm/linalg/lu.hpp"
#include "osm/precond/preconditioner.hpp"
#include "osm/schwarz/solver.hpp"

using namespace osm;

namespace
{

Grid strip(Index n_x, Index n_y) { return Grid::from_bounds(-4.0, 4.0, -2.0, 2.0, n_x, n_y); }

ComplexSparseMatrix local_matrix(const Grid &g)
{
  return add(add(assemble_mass(g), assemble_stiffness(g), Complex(0.0, 200.0), -1.0),
             assemble_boundary_mass(g, Sides::both()), 1.0, Complex(0.0, 10.0));
}

CVec datum(const Grid &g)
{
  return interpolate(g, [](double x, double y) { return std::exp(Complex(-x * x - y * y, -0.5 * x)); });
}

ProblemSetup setup(const Grid &g, int n, TransmissionSpec spec)
{
  ProblemSetup s;
  s.grid = g;
  s.subdomains = n;
  s.spec = std::move(spec);
  s.potential = PotentialField::zero(g, Nonlinearity::cubic(1.0));
  return s;
}

}  // namespace

static void BM_BandLU(benchmark::State &state)
{
  const Grid g = strip(state.range(0) + 1, 33);
  const auto a = local_matrix(g);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(lu_factorize(a));
  }
  state.counters["nodes"] = static_cast<double>(g.num_nodes());
}
BENCHMARK(BM_BandLU)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_BandSolve(benchmark::State &state)
{
  const Grid g = strip(state.range(0) + 1, 33);
  const auto lu = lu_factorize(local_matrix(g));
  const CVec b = CVec::Ones(g.num_nodes());
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(lu.solve(b));
  }
}
BENCHMARK(BM_BandSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_ClassicalStep(benchmark::State &state)
{
  const int n = static_cast<int>(state.range(0));
  const Grid g = strip(129, 33);
  SchwarzSolver solver(setup(g, n, TransmissionSpec::pade(2)), {});
  const auto h = solver.split(datum(g));
  const InterfaceVector g0 = solver.zero_interface();
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solver.classical_step(g0, h));
  }
}
BENCHMARK(BM_ClassicalStep)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BuildPreconditioner(benchmark::State &state)
{
  const int n = static_cast<int>(state.range(0));
  const Grid g = strip(129, 33);
  SchwarzSolver solver(setup(g, n, TransmissionSpec::pade(2)), {});
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(build_preconditioner_blocks(solver));
  }
}
BENCHMARK(BM_BuildPreconditioner)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_TimeStep(benchmark::State &state)
{
  const Grid g = strip(129, 33);
  SchwarzConfig cfg;
  cfg.algorithm = state.range(0) ? Algorithm::preconditioned : Algorithm::classical;
  SchwarzSolver solver(setup(g, 4, TransmissionSpec::pade(2)), cfg);
  if (state.range(0))
  {
    install_preconditioner(solver);
  }
  const CVec u0 = datum(g);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solver.run_time_step(u0, solver.zero_interface()));
  }
}
BENCHMARK(BM_TimeStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "osm/error.hpp"
#include "osm/fem/assembly.hpp"
#include "osm/schwarz/solver.hpp"
#include "support.hpp"

using namespace osm;
using osm::testing::max_abs_diff;
using osm::testing::random_vector;

namespace
{

const Complex kI(0.0, 1.0);

CVec gaussian(const Grid &g)
{
  return interpolate(g, [](double x, double y)
                     { return std::exp(-x * x - y * y) * Complex(std::cos(0.5 * x), -std::sin(0.5 * x)); });
}

ProblemSetup free_setup(const Grid &g, int n, TransmissionSpec spec, double dt = 0.01)
{
  ProblemSetup s;
  s.grid = g;
  s.subdomains = n;
  s.dt = dt;
  s.spec = std::move(spec);
  s.potential = PotentialField::zero(g);
  return s;
}

// Independent R_h for Robin with transmission on both outer sides, from dense solves.
struct DenseRobinMap
{
  Decomposition d;
  double dt, p;
  std::vector<CMat> k;
  std::vector<CVec> h_rhs;
  CMat mg;

  DenseRobinMap(const Grid &global, int n, double dt_, double p_, const CVec &u_prev)
    : d(decompose(global, n)), dt(dt_), p(p_)
  {
    for (int j = 0; j < n; ++j)
    {
      const Grid &g = d.grid(j);
      const CMat mass = assemble_mass(g).to_dense();
      mg = assemble_boundary_mass(g, Sides::both()).to_dense();
      k.push_back((2.0 * kI / dt) * mass - assemble_stiffness(g).to_dense() + kI * p * mg);
      h_rhs.push_back((2.0 * kI / dt) * (mass * d.restrict_field(j, u_prev)));
    }
  }

  CVec apply(const CVec &gvec) const
  {
    const Index ny = d.global.n_y;
    InterfaceVector g(d.n, ny, gvec), out(d.n, ny);
    for (int j = 0; j < d.n; ++j)
    {
      const Grid &gr = d.grid(j);
      const auto ln = line_nodes(gr, Side::left), rn = line_nodes(gr, Side::right);
      CVec flux = CVec::Zero(gr.num_nodes());
      for (Index i = 0; i < ny; ++i)
      {
        flux[ln[i]] += g.left(j)[i];
        flux[rn[i]] += g.right(j)[i];
      }
      const CVec v = k[j].fullPivLu().solve(CVec(h_rhs[j] - mg * flux));
      CVec tl(ny), tr(ny);
      for (Index i = 0; i < ny; ++i)
      {
        tl[i] = v[ln[i]];
        tr[i] = v[rn[i]];
      }
      if (j > 0)
        out.set_right(j - 1, -g.left(j) - 2.0 * kI * p * tl);
      if (j < d.n - 1)
        out.set_left(j + 1, -g.right(j) - 2.0 * kI * p * tr);
    }
    return out.data();
  }
};

}  // namespace

TEST_CASE("decompose examples")
{
  const Grid g = Grid::from_bounds(0.0, 1.0, 0.0, 1.0, 9, 5);
  const auto d = decompose(g, 2);
  REQUIRE(d.n == 2);
  CHECK(d.grid(0).n_x == 5);
  CHECK(d.grid(1).n_x == 5);
  CHECK(d.grid(0).x_right == d.grid(1).x_left);
  CHECK(d.grid(0).x_right == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.equal_subdomains());

  const auto one = decompose(g, 1);
  CHECK(one.n == 1);
  CHECK(InterfaceVector(1, g.n_y).size() == 0);

  const Grid g10 = Grid::from_bounds(0.0, 1.0, 0.0, 1.0, 10, 5);
  CHECK_THROWS_AS(decompose(g10, 4), ConfigError);
  CHECK_THROWS_AS(decompose(g, 0), ConfigError);
}

TEST_CASE("decomposition widths partition the domain and glue inverts restriction")
{
  const Grid g = Grid::from_bounds(-3.0, 5.0, -1.0, 1.0, 33, 7);
  std::mt19937_64 rng(21);
  const CVec u = random_vector(g.num_nodes(), rng);
  for (int n : {1, 2, 4, 8})
  {
    const auto d = decompose(g, n);
    double total = 0.0;
    for (int j = 0; j < n; ++j)
    {
      total += d.grid(j).width();
      if (j + 1 < n)
      {
        CHECK(d.grid(j).x_right == d.grid(j + 1).x_left);
      }
    }
    CHECK(total == doctest::Approx(g.width()).epsilon(1e-14));
    std::vector<CVec> parts;
    for (int j = 0; j < n; ++j)
    {
      parts.push_back(d.restrict_field(j, u));
    }
    CHECK(max_abs_diff(d.glue(parts), u) == 0.0);
  }
}

TEST_CASE("interface vector layout")
{
  InterfaceVector g(4, 3);
  CHECK(g.size() == 2 * 3 * 3);
  CHECK_FALSE(g.has_left(0));
  CHECK_FALSE(g.has_right(3));
  CHECK(g.right_offset(0) == 0);
  CHECK(g.left_offset(1) == 3);
  CHECK(g.right_offset(1) == 6);
  CHECK(g.left_offset(3) == 15);
  CHECK(g.left(0).norm() == 0.0);
  CHECK_THROWS_AS(g.set_left(0, CVec::Ones(3)), DimensionError);
  CHECK_THROWS_AS(g.set_right(3, CVec::Ones(3)), DimensionError);

  const auto a = InterfaceVector::random(4, 3, 7);
  const auto b = InterfaceVector::random(4, 3, 7);
  CHECK(max_abs_diff(a.data(), b.data()) == 0.0);
  CHECK(a.data().real().cwiseAbs().maxCoeff() <= 1.0);
  CHECK(a.data().imag().cwiseAbs().maxCoeff() <= 1.0);
  CHECK_THROWS_AS(InterfaceVector(3, 2, CVec::Zero(5)), DimensionError);
}

TEST_CASE("zero solution sends back the negated incoming flux")
{
  const Grid g = Grid::from_bounds(0.0, 1.0, 0.0, 1.0, 5, 5);
  std::mt19937_64 rng(22);
  for (const auto &spec : {TransmissionSpec::robin(3.0), TransmissionSpec::pade(2)})
  {
    LocalProblem prob(g, 0.01, spec, PotentialField::zero(g));
    LocalSolution sol;
    sol.v = CVec::Zero(g.num_nodes());
    sol.aux.assign(static_cast<std::size_t>(spec.aux_count()), CVec::Zero(2 * g.n_y));
    const CVec l = random_vector(g.n_y, rng), r = random_vector(g.n_y, rng);
    const auto [lo, ro] = compute_outgoing_fluxes(sol, spec, prob, l, r);
    CHECK(max_abs_diff(lo, -l) == 0.0);
    CHECK(max_abs_diff(ro, -r) == 0.0);
  }
}

TEST_CASE("zero datum and zero interface stay zero")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  SchwarzSolver solver(free_setup(g, 4, TransmissionSpec::pade(2)), {});
  const auto out = solver.classical_step(solver.zero_interface(), solver.split(CVec::Zero(g.num_nodes())));
  CHECK(out.g_next.norm() == 0.0);
}

TEST_CASE("extreme fluxes stay absent and do not influence the iteration")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 25, 9);
  SchwarzSolver solver(free_setup(g, 3, TransmissionSpec::robin(5.0)), {});
  const auto h = solver.split(gaussian(g));
  const auto out = solver.classical_step(solver.zero_interface(), h);
  CHECK(out.g_next.size() == 2 * 2 * g.n_y);
  CHECK(out.g_next.left(0).norm() == 0.0);
  CHECK(out.g_next.right(2).norm() == 0.0);
}

TEST_CASE("free problem: R_h is affine")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  std::mt19937_64 rng(23);
  for (const auto &spec : {TransmissionSpec::robin(10.0), TransmissionSpec::pade(2)})
  {
    SchwarzSolver solver(free_setup(g, 4, spec), {});
    const auto h = solver.split(gaussian(g));
    const Index len = solver.zero_interface().size();
    const auto r0 = solver.classical_step(solver.zero_interface(), h).g_next.data();
    for (int t = 0; t < 3; ++t)
    {
      const CVec a = random_vector(len, rng), b = random_vector(len, rng);
      const Complex s(0.3, -0.8);
      auto R = [&](const CVec &x)
      { return CVec(solver.classical_step(InterfaceVector(4, g.n_y, x), h).g_next.data() - r0); };
      const CVec lhs = R(a + s * b);
      const CVec rhs = R(a) + s * R(b);
      CHECK(max_abs_diff(lhs, rhs) < 1e-12 * rhs.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("iteration count matches a dense interface-matrix oracle")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  const double dt = 0.01, p = 10.0;
  const CVec u0 = gaussian(g);
  SchwarzSolver solver(free_setup(g, 2, TransmissionSpec::robin(p), dt), {});
  const auto res = solver.run_time_step(u0, solver.zero_interface());

  DenseRobinMap map(g, 2, dt, p, u0);
  const Index len = 2 * g.n_y;
  REQUIRE(len <= 400);
  const CVec b = map.apply(CVec::Zero(len));
  CMat L(len, len);
  for (Index c = 0; c < len; ++c)
  {
    L.col(c) = map.apply(CVec::Unit(len, c)) - b;
  }
  CVec x = CVec::Zero(len);
  int count = 0;
  for (; count < 1000;)
  {
    const CVec y = L * x + b;
    ++count;
    const double upd = (y - x).norm();
    x = y;
    if (upd < 1e-10)
    {
      break;
    }
  }
  CHECK(res.history.iterations() == count);
  CHECK(max_abs_diff(res.g.data(), x) < 1e-9);

  // The converged vector is a fixed point of R_h.
  const auto again = solver.classical_step(res.g, solver.split(u0));
  CHECK((again.g_next.data() - res.g.data()).norm() < 1e-10);
}

TEST_CASE("multidomain solution agrees with the monodomain solve")
{
  const Grid g = Grid::from_bounds(-4.0, 4.0, -2.0, 2.0, 33, 17);
  const double dt = 0.01;
  for (const auto &spec : {TransmissionSpec::robin(8.0), TransmissionSpec::pade(2)})
  {
    for (double beta : {0.0, 1.0})
    {
      const auto f = Nonlinearity::cubic(beta);
      Eigen::VectorXd w = interpolate_real(g, [](double x, double y) { return -0.1 * (x * x + y * y); });
      LocalProblem mono(g, dt, spec, PotentialField{w, f});
      ProblemSetup setup = free_setup(g, 4, spec, dt);
      setup.potential = PotentialField{w, f};
      SchwarzConfig cfg;
      cfg.max_iterations = 2000;
      SchwarzSolver solver(setup, cfg);
      CVec u_ref = gaussian(g), u = u_ref;
      InterfaceVector gi = solver.zero_interface();
      const CVec z = CVec::Zero(g.n_y);
      for (int n = 1; n <= 3; ++n)
      {
        u_ref = advance_time(u_ref, mono.solve_nonlinear(u_ref, z, z).v);
        auto step = solver.run_time_step(u, gi, n);
        u = step.u;
        gi = step.g;
      }
      CHECK(max_abs_diff(u, u_ref) < 1e-8);
    }
  }
}

TEST_CASE("single subdomain takes one local solve and no iterations")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  SchwarzSolver solver(free_setup(g, 1, TransmissionSpec::robin(4.0)), {});
  LocalProblem mono(g, 0.01, TransmissionSpec::robin(4.0), PotentialField::zero(g));
  const CVec u0 = gaussian(g);
  const auto res = solver.run_time_step(u0, solver.zero_interface());
  CHECK(res.history.iterations() == 0);
  const CVec z = CVec::Zero(g.n_y);
  CHECK(max_abs_diff(res.u, advance_time(u0, mono.solve_linear(u0, z, z).v)) == 0.0);
}

TEST_CASE("restarting a step from its converged vector")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  const CVec u0 = gaussian(g);
  SchwarzSolver solver(free_setup(g, 2, TransmissionSpec::robin(10.0)), {});
  const auto first = solver.run_time_step(u0, solver.zero_interface());
  const auto again = solver.run_time_step(u0, first.g);
  CHECK(again.history.iterations() <= 2);
  CHECK(max_abs_diff(again.u, first.u) < 1e-9);
}

TEST_CASE("iteration cap raises NotConverged")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  SchwarzConfig cfg;
  cfg.max_iterations = 2;
  SchwarzSolver solver(free_setup(g, 2, TransmissionSpec::robin(10.0)), cfg);
  try
  {
    solver.run_time_step(gaussian(g), solver.zero_interface());
    FAIL("expected NotConverged");
  }
  catch (const NotConverged &e)
  {
    CHECK(e.iterations() == 2);
    CHECK(e.best().size() == 2 * g.n_y);
  }
}

TEST_CASE("local failures carry the subdomain index")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  ProblemSetup setup = free_setup(g, 2, TransmissionSpec::robin(1.0), 50.0);
  setup.potential.f = Nonlinearity::cubic(50.0);
  SchwarzConfig cfg;
  cfg.fixed_point = {1e-12, 3};
  SchwarzSolver solver(setup, cfg);
  // Datum confined to the right strip.
  const CVec u0 = interpolate(g, [](double x, double y)
                              { return x < 0.5 ? 0.0 : 3.0 * std::exp(-4.0 * ((x - 1.0) * (x - 1.0) + y * y)); });
  try
  {
    solver.classical_step(solver.zero_interface(), solver.split(u0));
    FAIL("expected SubdomainError");
  }
  catch (const SubdomainError &e)
  {
    CHECK(e.subdomain() == 1);
    CHECK_THROWS_AS(std::rethrow_if_nested(e), NotConverged);
  }
}

TEST_CASE("serial and worker modes give bit-identical histories")
{
  const Grid g = Grid::from_bounds(-4.0, 4.0, -2.0, 2.0, 33, 17);
  ProblemSetup setup = free_setup(g, 4, TransmissionSpec::pade(2));
  setup.potential.f = Nonlinearity::cubic(1.0);
  SchwarzConfig serial, threaded;
  serial.init = threaded.init = InitMode::random;
  serial.seed = threaded.seed = 5;
  threaded.parallel = true;
  SchwarzSolver a(setup, serial), b(setup, threaded);
  CHECK(b.pool().workers() == 4);
  SimulationConfig sim;
  sim.t_final = 0.02;
  const auto ra = run_simulation(a, gaussian(g), sim);
  const auto rb = run_simulation(b, gaussian(g), sim);
  REQUIRE(ra.histories.size() == rb.histories.size());
  for (std::size_t k = 0; k < ra.histories.size(); ++k)
  {
    CHECK(ra.histories[k].update_norms == rb.histories[k].update_norms);
  }
  CHECK(max_abs_diff(ra.u_final, rb.u_final) == 0.0);
}

TEST_CASE("run_simulation step bookkeeping and restart")
{
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  ProblemSetup setup = free_setup(g, 2, TransmissionSpec::robin(10.0));
  setup.potential.f = Nonlinearity::cubic(1.0);
  SchwarzSolver solver(setup, {});
  const CVec u0 = gaussian(g);

  SimulationConfig one;
  one.t_final = setup.dt;
  const auto r1 = run_simulation(solver, u0, one);
  CHECK(r1.steps == 1);
  CHECK(r1.histories.size() == 1);

  SimulationConfig full;
  full.t_final = 4 * setup.dt;
  full.snapshot_steps = {2, 4};
  const auto all = run_simulation(solver, u0, full);
  REQUIRE(all.snapshots.size() == 2);
  CHECK(all.snapshots[0].first == 2);

  SimulationConfig head;
  head.t_final = 2 * setup.dt;
  const auto h = run_simulation(solver, u0, head);
  SimulationConfig tail;
  tail.t_final = 2 * setup.dt;
  tail.first_step = 3;
  tail.g_start = h.g_final;
  const auto t = run_simulation(solver, h.u_final, tail);
  CHECK(max_abs_diff(t.u_final, all.u_final) == 0.0);
  CHECK(t.histories.front().time_step == 3);

  CHECK_THROWS_AS(step_count(0.0, 0.01), ConfigError);
  CHECK(step_count(0.1, 0.01) == 10);
}

TEST_CASE("Neumann outer boundary conserves mass across the decomposition")
{
  const Grid g = Grid::from_bounds(-4.0, 4.0, -4.0, 4.0, 33, 17);
  ProblemSetup setup = free_setup(g, 2, TransmissionSpec::robin(8.0));
  setup.outer = OuterBoundary::neumann;
  setup.potential = PotentialField{interpolate_real(g, [](double x, double y) { return -0.5 * (x * x + y * y); }),
                                   Nonlinearity::cubic(1.0)};
  SchwarzConfig cfg;
  cfg.max_iterations = 2000;
  SchwarzSolver solver(setup, cfg);
  CHECK_FALSE(solver.local(0).has_transmission(Side::left));
  CHECK(solver.local(0).has_transmission(Side::right));
  CHECK_FALSE(solver.local(1).has_transmission(Side::right));
  SimulationConfig sim;
  sim.t_final = 5 * setup.dt;
  const CVec u0 = gaussian(g);
  const auto res = run_simulation(solver, u0, sim);
  const auto mass = assemble_mass(g);
  const double n0 = mass_norm_squared(mass, u0);
  CHECK(std::abs(mass_norm_squared(mass, res.u_final) - n0) < 1e-8 * n0);
}

TEST_CASE("config validation")
{
  SchwarzConfig cfg;
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  const Grid g = Grid::from_bounds(-2.0, 2.0, -1.0, 1.0, 17, 9);
  SchwarzSolver solver(free_setup(g, 2, TransmissionSpec::robin(1.0)), {});
  CHECK_THROWS_AS(solver.preconditioned_step(solver.zero_interface(), solver.split(gaussian(g))),
                  ConfigError);
}

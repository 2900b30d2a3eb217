// SPDX-License-Identifier: Apache-2.0

#include "osm/schwarz/solver.hpp"

#include <cmath>
#include <algorithm>
#include <exception>
#include <string>

#include "osm/error.hpp"

namespace osm
{

namespace
{

// Runs fn(j) for every subdomain and attaches the subdomain index to failures.
void for_each_subdomain(WorkerPool &pool, int n, const std::function<void(int)> &fn)
{
  pool.run(n,
           [&](int j)
           {
             try
             {
               fn(j);
             }
             catch (const SubdomainError &)
             {
               throw;
             }
             catch (const std::exception &e)
             {
               std::throw_with_nested(SubdomainError(j, e.what()));
             }
           });
}

}  // namespace

void SchwarzConfig::validate() const
{
  if (!(tolerance > 0.0))
  {
    throw ConfigError("Schwarz tolerance must be positive");
  }
  if (max_iterations < 1)
  {
    throw ConfigError("Schwarz max_iterations must be at least 1");
  }
  krylov.validate();
}

LocalOptions local_options_for(const ProblemSetup &setup, int j)
{
  LocalOptions o = setup.local;
  o.tc_sides = Sides::both();
  if (setup.outer == OuterBoundary::neumann)
  {
    if (j == 0)
    {
      o.tc_sides.left = false;
    }
    if (j == setup.subdomains - 1)
    {
      o.tc_sides.right = false;
    }
  }
  return o;
}

CVec compute_outgoing_flux(const TransmissionSpec &spec, const LocalProblem &prob,
                           const LocalSolution &sol, Side side, const CVec &incoming)
{
  const CVec tr = prob.trace(sol.v, side);
  return -incoming + 2.0 * apply_discrete_tc(spec, tr, sol.aux_side(side));
}

std::pair<CVec, CVec> compute_outgoing_fluxes(const LocalSolution &sol,
                                              const TransmissionSpec &spec,
                                              const LocalProblem &prob, const CVec &l_in,
                                              const CVec &r_in)
{
  return {compute_outgoing_flux(spec, prob, sol, Side::left, l_in),
          compute_outgoing_flux(spec, prob, sol, Side::right, r_in)};
}

SchwarzSolver::SchwarzSolver(const ProblemSetup &setup, SchwarzConfig cfg)
  : setup_(setup), cfg_(std::move(cfg)), decomp_(decompose(setup.grid, setup.subdomains))
{
  cfg_.validate();
  if (setup_.potential.values.size() == 0)
  {
    setup_.potential.values = Eigen::VectorXd::Zero(setup_.grid.num_nodes());
  }
  if (setup_.potential.values.size() != setup_.grid.num_nodes())
  {
    throw DimensionError("potential does not match the global grid");
  }
  const int n = decomp_.n;
  pool_ = std::make_unique<WorkerPool>(cfg_.parallel && n > 1 ? n : 0);
  locals_.resize(static_cast<std::size_t>(n));
  for_each_subdomain(*pool_, n,
                     [&](int j)
                     {
                       PotentialField w{decomp_.restrict_field(j, setup_.potential.values),
                                        setup_.potential.f};
                       locals_[j] = std::make_unique<LocalProblem>(
                           decomp_.grid(j), setup_.dt, setup_.spec, std::move(w),
                           local_options_for(setup_, j));
                     });
}

void SchwarzSolver::set_potential(const Eigen::VectorXd &w)
{
  if (w.size() != setup_.grid.num_nodes())
  {
    throw DimensionError("potential does not match the global grid");
  }
  for_each_subdomain(*pool_, decomp_.n,
                     [&](int j) { locals_[j]->set_potential(decomp_.restrict_field(j, w)); });
}

InterfaceVector SchwarzSolver::zero_interface() const
{
  return InterfaceVector(decomp_.n, setup_.grid.n_y);
}

InterfaceVector SchwarzSolver::initial_interface() const
{
  return cfg_.init == InitMode::random
             ? InterfaceVector::random(decomp_.n, setup_.grid.n_y, cfg_.seed)
             : zero_interface();
}

std::vector<CVec> SchwarzSolver::split(const CVec &global_field) const
{
  std::vector<CVec> out;
  for (int j = 0; j < decomp_.n; ++j)
  {
    out.push_back(decomp_.restrict_field(j, global_field));
  }
  return out;
}

std::pair<CVec, CVec> SchwarzSolver::outgoing_fluxes(int j, const LocalSolution &sol,
                                                     const CVec &l_in, const CVec &r_in) const
{
  return compute_outgoing_fluxes(sol, setup_.spec, local(j), l_in, r_in);
}

StepOutcome SchwarzSolver::classical_step(const InterfaceVector &g,
                                          const std::vector<CVec> &h) const
{
  const int n = decomp_.n;
  if (g.subdomains() != n || static_cast<int>(h.size()) != n)
  {
    throw DimensionError("interface vector or local data do not match the decomposition");
  }
  StepOutcome out{InterfaceVector(n, setup_.grid.n_y), std::vector<LocalSolution>(n)};
  std::vector<std::pair<CVec, CVec>> fluxes(static_cast<std::size_t>(n));
  for_each_subdomain(*pool_, n,
                     [&](int j)
                     {
                       const CVec l = g.left(j), r = g.right(j);
                       out.solutions[j] =
                           locals_[j]->solve_nonlinear(h[j], l, r, cfg_.fixed_point);
                       fluxes[j] = outgoing_fluxes(j, out.solutions[j], l, r);
                     });
  // Exchange: left output of j feeds r_{j-1}, right output feeds l_{j+1}.
  for (int j = 0; j < n; ++j)
  {
    if (j > 0)
    {
      out.g_next.set_right(j - 1, fluxes[j].first);
    }
    if (j < n - 1)
    {
      out.g_next.set_left(j + 1, fluxes[j].second);
    }
  }
  return out;
}

StepOutcome SchwarzSolver::preconditioned_step(const InterfaceVector &g,
                                               const std::vector<CVec> &h) const
{
  if (!precond_)
  {
    throw ConfigError("preconditioned step requested without a preconditioner");
  }
  StepOutcome r = classical_step(g, h);
  const CVec residual = g.data() - r.g_next.data();
  const CVec correction = precond_->apply_inverse(residual);
  r.g_next.data() = g.data() - correction;
  return r;
}

TimeStepResult SchwarzSolver::run_time_step(const CVec &u_prev, const InterfaceVector &g_init,
                                            int time_step) const
{
  const auto h = split(u_prev);
  TimeStepResult res;
  res.history.time_step = time_step;
  std::vector<LocalSolution> sols;
  if (decomp_.n == 1)
  {
    const CVec zero = CVec::Zero(setup_.grid.n_y);
    try
    {
      sols.push_back(locals_[0]->solve_nonlinear(h[0], zero, zero, cfg_.fixed_point));
    }
    catch (const std::exception &e)
    {
      std::throw_with_nested(SubdomainError(0, e.what()));
    }
    res.g = zero_interface();
  }
  else
  {
    InterfaceVector g = g_init;
    bool converged = false;
    double last = 0.0;
    for (int k = 1; k <= cfg_.max_iterations; ++k)
    {
      StepOutcome step = cfg_.algorithm == Algorithm::preconditioned ? preconditioned_step(g, h)
                                                                     : classical_step(g, h);
      last = (step.g_next.data() - g.data()).norm();
      if (!std::isfinite(last))
      {
        throw Diverged("interface update became non-finite at iteration " + std::to_string(k) +
                       " of time step " + std::to_string(time_step));
      }
      res.history.update_norms.push_back(last);
      g = std::move(step.g_next);
      sols = std::move(step.solutions);
      if (last < cfg_.tolerance)
      {
        converged = true;
        break;
      }
    }
    if (!converged)
    {
      throw NotConverged("Schwarz iteration did not converge in " +
                             std::to_string(cfg_.max_iterations) + " iterations at time step " +
                             std::to_string(time_step) + " (last update " +
                             std::to_string(last) + ")",
                         last, cfg_.max_iterations, g.data());
    }
    res.g = std::move(g);
  }
  std::vector<CVec> vs;
  for (auto &s : sols)
  {
    vs.push_back(std::move(s.v));
  }
  res.v = decomp_.glue(vs);
  res.u = advance_time(u_prev, res.v);
  return res;
}

int step_count(double t_final, double dt)
{
  if (!(dt > 0.0) || !(t_final >= dt * (1.0 - 1e-12)))
  {
    throw ConfigError("need dt > 0 and T >= dt");
  }
  return static_cast<int>(std::llround(t_final / dt));
}

SimulationResult run_simulation(SchwarzSolver &solver, const CVec &u0, const SimulationConfig &sim)
{
  if (u0.size() != solver.setup().grid.num_nodes())
  {
    throw DimensionError("initial datum does not match the global grid");
  }
  SimulationResult out;
  out.steps = step_count(sim.t_final, solver.setup().dt);
  CVec u = u0;
  InterfaceVector g = sim.g_start ? *sim.g_start : solver.initial_interface();
  for (int k = 0; k < out.steps; ++k)
  {
    const int n = sim.first_step + k;
    try
    {
      if (sim.potential_at_step)
      {
        solver.set_potential(sim.potential_at_step(n));
      }
      auto step = solver.run_time_step(u, g, n);
      u = std::move(step.u);
      g = std::move(step.g);
      out.histories.push_back(std::move(step.history));
    }
    catch (const std::exception &e)
    {
      std::throw_with_nested(Error("time step " + std::to_string(n) + " failed: " + e.what()));
    }
    const bool keep = sim.snapshot_steps.empty()
                          ? (k + 1 == out.steps)
                          : std::find(sim.snapshot_steps.begin(), sim.snapshot_steps.end(), n) !=
                                sim.snapshot_steps.end();
    if (keep)
    {
      out.snapshots.emplace_back(n, u);
    }
  }
  out.u_final = std::move(u);
  out.g_final = std::move(g);
  return out;
}

}  // namespace osm

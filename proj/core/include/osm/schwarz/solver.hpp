// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_SCHWARZ_SOLVER_HPP
#define OSM_SCHWARZ_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "osm/linalg/krylov.hpp"
#include "osm/schwarz/decomposition.hpp"
#include "osm/schwarz/interface_vector.hpp"
#include "osm/schwarz/worker_pool.hpp"
#include "osm/subdomain/local_problem.hpp"

namespace osm
{

enum class InitMode
{
  zero,
  random
};

enum class Algorithm
{
  classical,
  preconditioned
};

// Boundary condition on the two outer vertical sides x = x_l and x = x_r.
enum class OuterBoundary
{
  transmission,  // the transmission operator with zero incoming flux
  neumann
};

struct SchwarzConfig
{
  double tolerance = 1e-10;  // on ||g^{k+1} - g^k||_2
  int max_iterations = 500;
  InitMode init = InitMode::zero;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::classical;
  FixedPointConfig fixed_point;
  KrylovConfig krylov;
  // One worker thread per subdomain; false runs the same supersteps serially.
  bool parallel = false;

  void validate() const;
};

// Update norms of one time step, one entry per Schwarz iteration.
struct ConvergenceHistory
{
  int time_step = 0;
  std::vector<double> update_norms;
  int iterations() const { return static_cast<int>(update_norms.size()); }
};

// Applies P^{-1} for the preconditioned iteration; implemented by the precond module.
class InterfacePreconditioner
{
public:
  virtual ~InterfacePreconditioner() = default;
  virtual CVec apply_inverse(const CVec &y) const = 0;
};

// Everything that defines the local problems of a run.
struct ProblemSetup
{
  Grid grid;
  int subdomains = 1;
  double dt = 0.01;
  TransmissionSpec spec = TransmissionSpec::robin(1.0);
  // Global nodal W (empty for zero) and the nonlinearity.
  PotentialField potential;
  LocalOptions local;
  OuterBoundary outer = OuterBoundary::transmission;
};

struct StepOutcome
{
  InterfaceVector g_next;
  std::vector<LocalSolution> solutions;
};

struct TimeStepResult
{
  CVec u;                 // global u_n
  CVec v;                 // global v_n
  InterfaceVector g;      // converged interface vector, for warm starts
  ConvergenceHistory history;
};

//
// Owns the decomposition, one LocalProblem per subdomain and the workers that run
// them. Each Schwarz iteration is a superstep: all local solves, then the neighbour
// exchange of outgoing traces, then the global update norm.
//
class SchwarzSolver
{
public:
  SchwarzSolver(const ProblemSetup &setup, SchwarzConfig cfg);

  const Decomposition &decomposition() const { return decomp_; }
  const SchwarzConfig &config() const { return cfg_; }
  const ProblemSetup &setup() const { return setup_; }
  int subdomains() const { return decomp_.n; }
  const LocalProblem &local(int j) const { return *locals_[static_cast<std::size_t>(j)]; }
  WorkerPool &pool() { return *pool_; }

  void set_preconditioner(std::shared_ptr<const InterfacePreconditioner> p) { precond_ = std::move(p); }
  const InterfacePreconditioner *preconditioner() const { return precond_.get(); }

  // New global potential W_n; reassembles and refactorizes each subdomain.
  void set_potential(const Eigen::VectorXd &w);

  InterfaceVector zero_interface() const;
  InterfaceVector initial_interface() const;

  // Local fields h_j from a global u_{n-1}.
  std::vector<CVec> split(const CVec &global_field) const;

  // One application of R_h: local solves with the fluxes in g, then the exchange.
  StepOutcome classical_step(const InterfaceVector &g, const std::vector<CVec> &h) const;
  // g - P^{-1}(g - R_h g); requires a preconditioner.
  StepOutcome preconditioned_step(const InterfaceVector &g, const std::vector<CVec> &h) const;

  // Iterates until the update norm is below tolerance, then advances u.
  TimeStepResult run_time_step(const CVec &u_prev, const InterfaceVector &g_init,
                               int time_step = 1) const;

  // Outgoing (left, right) traces of subdomain j for its solution and incoming fluxes.
  std::pair<CVec, CVec> outgoing_fluxes(int j, const LocalSolution &sol, const CVec &l_in,
                                        const CVec &r_in) const;

private:
  ProblemSetup setup_;
  SchwarzConfig cfg_;
  Decomposition decomp_;
  std::vector<std::unique_ptr<LocalProblem>> locals_;
  std::unique_ptr<WorkerPool> pool_;
  std::shared_ptr<const InterfacePreconditioner> precond_;
};

// Local options of subdomain j: outer sides follow setup.outer.
LocalOptions local_options_for(const ProblemSetup &setup, int j);

// Outgoing trace on one side: -incoming + 2 S(trace, aux).
CVec compute_outgoing_flux(const TransmissionSpec &spec, const LocalProblem &prob,
                           const LocalSolution &sol, Side side, const CVec &incoming);
// Both sides at once.
std::pair<CVec, CVec> compute_outgoing_fluxes(const LocalSolution &sol,
                                              const TransmissionSpec &spec,
                                              const LocalProblem &prob, const CVec &l_in,
                                              const CVec &r_in);

struct SimulationConfig
{
  double t_final = 0.01;
  // Steps at which snapshots are kept (1-based). Empty keeps only the last.
  std::vector<int> snapshot_steps;
  // Potential W_n for step n (global nodal values); null keeps the setup potential.
  std::function<Eigen::VectorXd(int)> potential_at_step;
  // Step number of the first step; used when restarting.
  int first_step = 1;
  std::optional<InterfaceVector> g_start;
};

struct SimulationResult
{
  CVec u_final;
  InterfaceVector g_final;
  std::vector<ConvergenceHistory> histories;
  std::vector<std::pair<int, CVec>> snapshots;
  int steps = 0;
};

int step_count(double t_final, double dt);

SimulationResult run_simulation(SchwarzSolver &solver, const CVec &u0, const SimulationConfig &sim);

}  // namespace osm

#endif  // OSM_SCHWARZ_SOLVER_HPP

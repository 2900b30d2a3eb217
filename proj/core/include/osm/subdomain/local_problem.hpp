// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_SUBDOMAIN_LOCAL_PROBLEM_HPP
#define OSM_SUBDOMAIN_LOCAL_PROBLEM_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/LU>

#include "osm/fem/assembly.hpp"
#include "osm/fem/grid.hpp"
#include "osm/linalg/lu.hpp"
#include "osm/transmission/transmission.hpp"

namespace osm
{

// Where the frozen nonlinearity f(zeta^{q-1}) enters the Picard iteration.
enum class NonlinearTreatment
{
  // Volume term M_f zeta^{q-1} moved to the right side; the system matrix stays fixed so
  // one factorization serves every iteration.
  lagged_volume,
  // Generalized mass M_f added to the system matrix, refactorized every iteration.
  frozen_volume,
  // Only a boundary generalized mass M^G_f on the transmission sides, no volume term.
  boundary_only
};

enum class PadeFormulation
{
  condensed,  // aux unknowns eliminated into dense boundary blocks
  block       // full coupled system in (v, phi_1, ..., phi_m)
};

struct LocalOptions
{
  double laplace_coefficient = 1.0;
  // Sides carrying the transmission condition. Other vertical sides are homogeneous
  // Neumann and ignore incoming fluxes.
  Sides tc_sides = Sides::both();
  NonlinearTreatment nonlinear = NonlinearTreatment::lagged_volume;
  PadeFormulation pade_formulation = PadeFormulation::condensed;
};

struct FixedPointConfig
{
  double tolerance = 1e-12;  // infinity norm of successive iterates
  int max_iterations = 100;
};

struct LocalSolution
{
  CVec v;
  // One vector per s = 1..m, holding (left trace; right trace), 2 n_y values. Empty for
  // Robin.
  std::vector<CVec> aux;
  int fixed_point_iterations = 0;

  // Auxiliary traces on one side, one per s.
  std::vector<CVec> aux_side(Side side) const;
};

//
// Semi-discrete problem on one strip:
//   (2i/dt) v + c Lap v + W v + f(v) v = (2i/dt) h,
//   c (d_n v + S v) = c l at x = a, c r at x = b, natural Neumann on top and bottom.
// System matrix A = (2i/dt) M - c S + M_W plus the transmission terms.
//
class LocalProblem
{
public:
  LocalProblem(const Grid &grid, double dt, TransmissionSpec spec, PotentialField w,
               LocalOptions options = {});

  // Replaces the nodal potential W and refactorizes.
  void set_potential(const Eigen::VectorXd &w);

  const Grid &grid() const { return grid_; }
  double dt() const { return dt_; }
  const TransmissionSpec &spec() const { return spec_; }
  const LocalOptions &options() const { return options_; }
  const PotentialField &potential() const { return w_; }
  const Nonlinearity &nonlinearity() const { return w_.f; }
  bool has_transmission(Side side) const;

  const ComplexSparseMatrix &mass() const { return mass_; }
  const ComplexSparseMatrix &stiffness() const { return stiffness_; }
  const ComplexSparseMatrix &volume_operator() const { return a_; }
  // Matrix factorized for the v unknowns (Robin, or condensed Pade).
  const ComplexSparseMatrix &system_matrix() const { return k_; }
  // Coupled Pade matrix in (v, phi_1, ..., phi_m); Pade only.
  ComplexSparseMatrix block_matrix() const;

  // (2i/dt) M h - c M^G Q^T (l; r), flux terms only on transmission sides.
  CVec load_vector(const CVec &h, const CVec &l, const CVec &r) const;
  // -c M^G Q_side^T trace.
  CVec boundary_load(Side side, const CVec &trace) const;

  CVec trace(const CVec &v, Side side) const;

  // Requires f = 0 (no nonlinearity).
  LocalSolution solve_linear(const CVec &h, const CVec &l, const CVec &r) const;
  LocalSolution solve_nonlinear(const CVec &h, const CVec &l, const CVec &r,
                                const FixedPointConfig &fp = {}) const;

  // Solves the linear system for several right-hand sides at once (columns of rhs,
  // overwritten with the v parts). Aux traces are recovered with recover_aux.
  void solve_columns(CMat &rhs) const;
  // phi_s = D_s^{-1} (G Q v - g_s), with g_s the lagged boundary term (may be empty).
  std::vector<CVec> recover_aux(const CVec &v, const std::vector<CVec> &lag = {}) const;

private:
  struct SideData
  {
    std::vector<Index> nodes;
    CMat gram;                                    // line mass G, dense
    std::vector<Eigen::PartialPivLU<CMat>> d_lu;  // D_s per s
    CMat t;                                       // sum_s a_s d_s D_s^{-1}
  };

  void build();
  CVec solve_v(const CVec &rhs, const std::vector<CVec> &lag, std::vector<CVec> *aux) const;
  std::vector<CVec> lag_terms(const CVec &zeta, const std::vector<CVec> &phi_prev) const;
  CVec lag_rhs(const std::vector<CVec> &lag) const;

  Grid grid_;
  double dt_;
  TransmissionSpec spec_;
  PotentialField w_;
  LocalOptions options_;

  ComplexSparseMatrix mass_;
  ComplexSparseMatrix stiffness_;
  ComplexSparseMatrix a_;
  ComplexSparseMatrix boundary_mass_tc_;
  ComplexSparseMatrix k_;
  std::array<SideData, 2> sides_;
  LUFactorization lu_;
  std::optional<LUFactorization> block_lu_;
};

LocalSolution solve_local_linear(const LocalProblem &prob, const CVec &h, const CVec &l,
                                 const CVec &r);
LocalSolution solve_local_nonlinear(const LocalProblem &prob, const CVec &h, const CVec &l,
                                    const CVec &r, const FixedPointConfig &fp = {});

// u_n = 2 v - u_{n-1}.
CVec advance_time(const CVec &u_prev, const CVec &v);

// M-weighted squared norm u^H M u.
double mass_norm_squared(const ComplexSparseMatrix &mass, const CVec &u);

}  // namespace osm

#endif  // OSM_SUBDOMAIN_LOCAL_PROBLEM_HPP

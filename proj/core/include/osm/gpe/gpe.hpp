// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_GPE_GPE_HPP
#define OSM_GPE_GPE_HPP

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "osm/schwarz/solver.hpp"

namespace osm
{

//
// Rotating condensate
//   i u_t + 1/2 Lap u - V u - beta |u|^2 u + omega L_z u = 0,  V = (gx^2 x^2 + gy^2 y^2) / 2,
// solved in rotating coordinates (x, y) = A(t) (xt, yt), where the rotation term drops out
// and the trap turns into the time-dependent V_t(t, xt, yt) = V(A(t) (xt, yt)).
//
struct GpeConfig
{
  double beta = 0.0;
  double omega = 0.0;
  double gamma_x = 1.0;
  double gamma_y = 1.0;
  double t_final = 0.01;
  double dt = 1e-4;

  void validate() const;
};

// [[cos wt, sin wt], [-sin wt, cos wt]].
Eigen::Matrix2d rotation_matrix(double t, double omega);

double trap_potential(double x, double y, const GpeConfig &cfg);
double transformed_potential(double t, double xt, double yt, const GpeConfig &cfg);

// True when V_t does not depend on t (no rotation, or an isotropic trap).
bool potential_is_static(const GpeConfig &cfg);

// Nodal W_n = -(V_t(t_n) + V_t(t_{n-1})) / 2 with t_n = n dt.
Eigen::VectorXd gpe_potential(const Grid &g, const GpeConfig &cfg, int step);

// Problem with Laplace coefficient 1/2, W_1 and f(u) = -beta |u|^2.
ProblemSetup gpe_problem(const GpeConfig &cfg, const Grid &g, int subdomains,
                         TransmissionSpec spec, OuterBoundary outer = OuterBoundary::transmission,
                         LocalOptions local = {});

struct GpeRunConfig
{
  GpeConfig gpe;
  Grid grid;
  int subdomains = 2;
  TransmissionSpec spec = TransmissionSpec::robin(1.0);
  OuterBoundary outer = OuterBoundary::transmission;
  LocalOptions local;
  SchwarzConfig schwarz;
  std::vector<int> snapshot_steps;
};

// Time steps the transformed equation; builds P once when the algorithm asks for it.
SimulationResult gpe_run(const GpeRunConfig &cfg, const CVec &u0);

// (x_l, x_r) x (y_b, y_t) scaled by 1/sqrt(2), sampled with n_x by n_y nodes.
Grid valid_zone(const Grid &g, Index n_x, Index n_y);

// Bilinear interpolation of a nodal field; DomainError outside the grid.
Complex interpolate_bilinear(const Grid &g, const CVec &u, double x, double y);

// u(t, x, y) = ut(A(t)^T (x, y)) on the target grid. DomainError when a target node is
// outside the valid zone or a lookup point leaves the computational domain.
CVec reconstruct_valid_zone(const CVec &ut, const Grid &g, double t, double omega,
                            const Grid &target);

struct EnergyResult
{
  double energy = 0.0;
  double mu = 0.0;
  double norm = 0.0;  // M-weighted L2 norm of the input
};

// Discrete energy and chemical potential in the laboratory frame,
//   E = int 1/2 |grad phi|^2 + V |phi|^2 + beta/2 |phi|^4 - omega conj(phi) L_z phi,
//   mu = E + beta/2 int |phi|^4,
// with L_z phi = -i (x phi_y - y phi_x) by centred differences. For t > 0, phi is read as a
// rotating-frame field and V is replaced by V_t(t); L_z commutes with the rotation, so
// this is the energy of the laboratory field.
EnergyResult energy_and_mu(const Grid &g, const CVec &phi, const GpeConfig &cfg, double t = 0.0);

// M-weighted L2 norm; NormalizationError for a zero field when normalizing.
double l2_norm(const Grid &g, const CVec &u);
CVec normalized(const Grid &g, const CVec &u);

struct GroundState
{
  Grid grid;
  CVec phi;           // normalized to unit M-norm
  double input_norm;  // norm before renormalization
};

// Reads a snapshot CSV; the grid must match `expected` (same counts and bounds).
GroundState load_ground_state(const std::filesystem::path &path, const Grid &expected);

}  // namespace osm

#endif  // OSM_GPE_GPE_HPP

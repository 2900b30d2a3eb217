// SPDX-License-Identifier: Apache-2.0

#include "osm/gpe/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "osm/error.hpp"
#include "osm/fem/assembly.hpp"
#include "osm/io/csv.hpp"
#include "osm/precond/preconditioner.hpp"

namespace osm
{

namespace
{

bool inside(double v, double lo, double hi)
{
  const double eps = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return v >= lo - eps && v <= hi + eps;
}

}  // namespace

void GpeConfig::validate() const
{
  if (!(dt > 0.0))
  {
    throw ConfigError("GPE time step must be positive");
  }
  if (!(t_final >= dt * (1.0 - 1e-12)))
  {
    throw ConfigError("GPE final time must be at least one time step");
  }
  if (!std::isfinite(beta) || !std::isfinite(omega) || !std::isfinite(gamma_x) ||
      !std::isfinite(gamma_y))
  {
    throw ConfigError("GPE coefficients must be finite");
  }
}

Eigen::Matrix2d rotation_matrix(double t, double omega)
{
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  Eigen::Matrix2d a;
  a << c, s, -s, c;
  return a;
}

double trap_potential(double x, double y, const GpeConfig &cfg)
{
  return 0.5 * (cfg.gamma_x * cfg.gamma_x * x * x + cfg.gamma_y * cfg.gamma_y * y * y);
}

double transformed_potential(double t, double xt, double yt, const GpeConfig &cfg)
{
  const Eigen::Vector2d p = rotation_matrix(t, cfg.omega) * Eigen::Vector2d(xt, yt);
  return trap_potential(p.x(), p.y(), cfg);
}

bool potential_is_static(const GpeConfig &cfg)
{
  return cfg.omega == 0.0 || cfg.gamma_x == cfg.gamma_y;
}

Eigen::VectorXd gpe_potential(const Grid &g, const GpeConfig &cfg, int step)
{
  const double tn = step * cfg.dt, tp = (step - 1) * cfg.dt;
  return interpolate_real(g, [&](double x, double y)
                          { return -0.5 * (transformed_potential(tn, x, y, cfg) +
                                           transformed_potential(tp, x, y, cfg)); });
}

ProblemSetup gpe_problem(const GpeConfig &cfg, const Grid &g, int subdomains,
                         TransmissionSpec spec, OuterBoundary outer, LocalOptions local)
{
  cfg.validate();
  ProblemSetup s;
  s.grid = g;
  s.subdomains = subdomains;
  s.dt = cfg.dt;
  s.spec = std::move(spec);
  s.potential = PotentialField{gpe_potential(g, cfg, 1), Nonlinearity::cubic(-cfg.beta)};
  local.laplace_coefficient = 0.5;
  s.local = local;
  s.outer = outer;
  return s;
}

SimulationResult gpe_run(const GpeRunConfig &cfg, const CVec &u0)
{
  const auto setup = gpe_problem(cfg.gpe, cfg.grid, cfg.subdomains, cfg.spec, cfg.outer, cfg.local);
  SchwarzSolver solver(setup, cfg.schwarz);
  if (cfg.schwarz.algorithm == Algorithm::preconditioned && solver.subdomains() > 1)
  {
    install_preconditioner(solver);
  }
  SimulationConfig sim;
  sim.t_final = cfg.gpe.t_final;
  sim.snapshot_steps = cfg.snapshot_steps;
  if (!potential_is_static(cfg.gpe))
  {
    const Grid g = cfg.grid;
    const GpeConfig gc = cfg.gpe;
    sim.potential_at_step = [g, gc](int n) { return gpe_potential(g, gc, n); };
  }
  return run_simulation(solver, u0, sim);
}

Grid valid_zone(const Grid &g, Index n_x, Index n_y)
{
  const double r = 1.0 / std::sqrt(2.0);
  return Grid::from_bounds(g.x_left * r, g.x_right * r, g.y_bottom * r, g.y_top * r, n_x, n_y);
}

Complex interpolate_bilinear(const Grid &g, const CVec &u, double x, double y)
{
  if (u.size() != g.num_nodes())
  {
    throw DimensionError("field does not match the grid");
  }
  if (!inside(x, g.x_left, g.x_right) || !inside(y, g.y_bottom, g.y_top))
  {
    throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") lies outside the computational domain");
  }
  const double fx = (x - g.x_left) / g.dx, fy = (y - g.y_bottom) / g.dy;
  const Index i = std::clamp<Index>(static_cast<Index>(std::floor(fx)), 0, g.n_x - 2);
  const Index j = std::clamp<Index>(static_cast<Index>(std::floor(fy)), 0, g.n_y - 2);
  const double s = std::clamp(fx - static_cast<double>(i), 0.0, 1.0);
  const double t = std::clamp(fy - static_cast<double>(j), 0.0, 1.0);
  return (1 - s) * (1 - t) * u[g.node(i, j)] + s * (1 - t) * u[g.node(i + 1, j)] +
         (1 - s) * t * u[g.node(i, j + 1)] + s * t * u[g.node(i + 1, j + 1)];
}

CVec reconstruct_valid_zone(const CVec &ut, const Grid &g, double t, double omega,
                            const Grid &target)
{
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Matrix2d at = rotation_matrix(t, omega).transpose();
  CVec out(target.num_nodes());
  for (Index j = 0; j < target.n_y; ++j)
  {
    for (Index i = 0; i < target.n_x; ++i)
    {
      const double x = target.x(i), y = target.y(j);
      if (!inside(x, g.x_left * r, g.x_right * r) || !inside(y, g.y_bottom * r, g.y_top * r))
      {
        throw DomainError("target point (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") lies outside the valid zone");
      }
      const Eigen::Vector2d p = at * Eigen::Vector2d(x, y);
      out[target.node(i, j)] = interpolate_bilinear(g, ut, p.x(), p.y());
    }
  }
  return out;
}

double l2_norm(const Grid &g, const CVec &u)
{
  return std::sqrt(mass_norm_squared(assemble_mass(g), u));
}

CVec normalized(const Grid &g, const CVec &u)
{
  const double n = l2_norm(g, u);
  if (!(n > 0.0))
  {
    throw NormalizationError("cannot normalize a field with zero norm");
  }
  return u / n;
}

EnergyResult energy_and_mu(const Grid &g, const CVec &phi, const GpeConfig &cfg, double t)
{
  if (phi.size() != g.num_nodes())
  {
    throw DimensionError("field does not match the grid");
  }
  const auto mass = assemble_mass(g);
  const CVec mphi = mass * phi;
  EnergyResult r;
  r.norm = std::sqrt(phi.dot(mphi).real());

  const double grad = phi.dot(assemble_stiffness(g) * phi).real();
  const CVec v = interpolate_real(g, [&](double x, double y) { return transformed_potential(t, x, y, cfg); })
                     .cast<Complex>();
  const double pot = phi.dot(apply_generalized_mass(g, v, phi)).real();
  const CVec dens = phi.cwiseAbs2().cast<Complex>();
  const double quartic = phi.dot(apply_generalized_mass(g, dens, phi)).real();

  double rot = 0.0;
  if (cfg.omega != 0.0)
  {
    CVec lz(g.num_nodes());
    for (Index j = 0; j < g.n_y; ++j)
    {
      for (Index i = 0; i < g.n_x; ++i)
      {
        const Index il = std::max<Index>(i - 1, 0), ir = std::min(i + 1, g.n_x - 1);
        const Index jb = std::max<Index>(j - 1, 0), jt = std::min(j + 1, g.n_y - 1);
        const Complex dx = (phi[g.node(ir, j)] - phi[g.node(il, j)]) / (g.x(ir) - g.x(il));
        const Complex dy = (phi[g.node(i, jt)] - phi[g.node(i, jb)]) / (g.y(jt) - g.y(jb));
        lz[g.node(i, j)] = Complex(0.0, -1.0) * (g.x(i) * dy - g.y(j) * dx);
      }
    }
    rot = cfg.omega * mphi.dot(lz).real();
  }
  r.energy = 0.5 * grad + pot + 0.5 * cfg.beta * quartic - rot;
  r.mu = r.energy + 0.5 * cfg.beta * quartic;
  return r;
}

GroundState load_ground_state(const std::filesystem::path &path, const Grid &expected)
{
  const Snapshot s = read_snapshot(path);
  const auto close = [](double a, double b)
  { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  if (s.grid.n_x != expected.n_x || s.grid.n_y != expected.n_y ||
      !close(s.grid.x_left, expected.x_left) || !close(s.grid.x_right, expected.x_right) ||
      !close(s.grid.y_bottom, expected.y_bottom) || !close(s.grid.y_top, expected.y_top))
  {
    throw ConfigError("ground state grid " + std::to_string(s.grid.n_x) + "x" +
                      std::to_string(s.grid.n_y) + " does not match the run grid " +
                      std::to_string(expected.n_x) + "x" + std::to_string(expected.n_y));
  }
  GroundState gs{expected, s.values, l2_norm(expected, s.values)};
  if (!(gs.input_norm > 0.0))
  {
    throw NormalizationError("ground state file " + path.string() + " holds a zero field");
  }
  gs.phi = s.values / gs.input_norm;
  return gs;
}

}  // namespace osm

// SPDX-License-Identifier: Apache-2.0

#include "osm/harness/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "osm/error.hpp"
#include "osm/io/csv.hpp"
#include "osm/precond/preconditioner.hpp"

#ifndef OSM_VERSION
#define OSM_VERSION "unknown"
#endif

namespace osm
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::filesystem::path prepare_output(const RunConfig &cfg)
{
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir))
  {
    throw Error("cannot create output directory " + cfg.output_dir.string());
  }
  return cfg.output_dir;
}

std::ofstream open_out(const std::filesystem::path &p)
{
  std::ofstream os(p);
  if (!os)
  {
    throw Error("cannot write " + p.string());
  }
  return os;
}

double mass_of(const Grid &g, const CVec &u)
{
  const double n = l2_norm(g, u);
  return n * n;
}

void write_meta(const RunConfig &cfg, const nlohmann::json &summary)
{
  open_out(cfg.output_dir / "meta.json") << metadata_json(cfg, summary.dump()) << "\n";
}

nlohmann::json iteration_summary(const std::vector<ConvergenceHistory> &h)
{
  nlohmann::json its = nlohmann::json::array();
  for (const auto &x : h)
  {
    its.push_back(x.iterations());
  }
  return its;
}

ProblemSetup setup_for(const RunConfig &cfg)
{
  if (cfg.mode == Mode::gpe)
  {
    return gpe_problem(cfg.gpe_config(), cfg.grid(), cfg.subdomains, cfg.spec(), cfg.outer, cfg.local);
  }
  return cfg.problem();
}

}  // namespace

std::string metadata_json(const RunConfig &cfg, const std::string &summary_json)
{
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(dump_config(cfg));
  j["seed"] = cfg.schwarz.seed;
  j["versions"] = {{"osm", OSM_VERSION},
                   {"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)}};
  j["summary"] = nlohmann::json::parse(summary_json);
  return j.dump(2);
}

SolveReport simulate(const RunConfig &cfg)
{
  cfg.validate();
  const Grid g = cfg.grid();
  const CVec u0 = initial_datum(cfg);
  SolveReport r;
  const auto t0 = Clock::now();
  if (cfg.mode == Mode::gpe)
  {
    r.result = gpe_run(cfg.gpe_run_config(), u0);
  }
  else
  {
    SchwarzSolver solver(cfg.problem(), cfg.schwarz);
    if (cfg.schwarz.algorithm == Algorithm::preconditioned && solver.subdomains() > 1)
    {
      install_preconditioner(solver);
    }
    SimulationConfig sim;
    sim.t_final = cfg.t_final;
    sim.snapshot_steps = cfg.snapshot_steps;
    r.result = run_simulation(solver, u0, sim);
  }
  r.wall_time = seconds_since(t0);
  r.mass_initial = mass_of(g, u0);
  r.mass_final = mass_of(g, r.result.u_final);
  return r;
}

SolveReport run_solve(const RunConfig &cfg)
{
  cfg.validate();
  const auto dir = prepare_output(cfg);
  SolveReport r = simulate(cfg);
  const Grid g = cfg.grid();
  {
    auto os = open_out(dir / "history.csv");
    write_history(os, r.result.histories);
  }
  for (const auto &[step, field] : r.result.snapshots)
  {
    write_snapshot(dir / snapshot_filename(step), g, field);
  }
  write_meta(cfg, {{"steps", r.result.steps},
                   {"iterations", iteration_summary(r.result.histories)},
                   {"mass_initial", r.mass_initial},
                   {"mass_final", r.mass_final},
                   {"wall_time", r.wall_time}});
  return r;
}

int first_step_iterations(const RunConfig &cfg, int subdomains, Algorithm algorithm, double *wall_time)
{
  RunConfig c = cfg;
  c.subdomains = subdomains;
  c.schwarz.algorithm = algorithm;
  c.validate();
  const auto t0 = Clock::now();
  int its = 0;
  if (subdomains > 1)
  {
    SchwarzSolver solver(setup_for(c), c.schwarz);
    if (algorithm == Algorithm::preconditioned)
    {
      install_preconditioner(solver);
    }
    its = solver.run_time_step(initial_datum(c), solver.initial_interface(), 1).history.iterations();
  }
  if (wall_time)
  {
    *wall_time = seconds_since(t0);
  }
  return its;
}

std::vector<IterationRow> run_iteration_table(const RunConfig &cfg, const std::vector<int> &n_list)
{
  if (n_list.empty())
  {
    throw ConfigError("iteration table needs at least one subdomain count");
  }
  const Grid g = cfg.grid();
  for (int n : n_list)
  {
    decompose(g, n);
  }
  std::vector<IterationRow> rows;
  for (int n : n_list)
  {
    IterationRow row;
    row.subdomains = n;
    row.classical = first_step_iterations(cfg, n, Algorithm::classical, &row.time_classical);
    row.preconditioned = first_step_iterations(cfg, n, Algorithm::preconditioned, &row.time_preconditioned);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> run_parameter_sweep(const RunConfig &cfg, SweepParameter parameter,
                                          const std::vector<double> &values)
{
  if (values.empty())
  {
    throw ConfigError("parameter sweep needs at least one value");
  }
  std::vector<SweepRow> rows;
  for (double v : values)
  {
    RunConfig c = cfg;
    if (parameter == SweepParameter::p)
    {
      c.tc = "robin";
      c.p = v;
    }
    else
    {
      if (v < 1.0 || v != std::floor(v))
      {
        throw ConfigError("Pade order must be a positive integer");
      }
      c.tc = "pade";
      c.m = static_cast<int>(v);
    }
    SweepRow row;
    row.value = v;
    row.classical = first_step_iterations(c, c.subdomains, Algorithm::classical);
    row.preconditioned = first_step_iterations(c, c.subdomains, Algorithm::preconditioned);
    rows.push_back(row);
  }
  return rows;
}

void write_iteration_table(std::ostream &os, const std::vector<IterationRow> &rows)
{
  os << "# schema_version=" << kTableSchemaVersion << "\n";
  os << "subdomains,iterations_classical,iterations_preconditioned,time_classical,time_preconditioned\n";
  char buf[160];
  for (const auto &r : rows)
  {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.3f,%.3f\n", r.subdomains, r.classical, r.preconditioned,
                  r.time_classical, r.time_preconditioned);
    os << buf;
  }
}

void write_sweep_table(std::ostream &os, SweepParameter parameter, const std::vector<SweepRow> &rows)
{
  os << "# schema_version=" << kTableSchemaVersion << "\n";
  os << (parameter == SweepParameter::p ? "p" : "m") << ",iterations_classical,iterations_preconditioned\n";
  char buf[96];
  for (const auto &r : rows)
  {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%d\n", r.value, r.classical, r.preconditioned);
    os << buf;
  }
}

BecReport run_bec_dynamics(const RunConfig &cfg)
{
  if (cfg.mode != Mode::gpe)
  {
    throw ConfigError("the bec experiment needs mode gpe");
  }
  cfg.validate();
  const CVec u0 = initial_datum(cfg);
  const auto dir = prepare_output(cfg);
  const Grid g = cfg.grid();
  const GpeConfig gc = cfg.gpe_config();
  const Grid zone = valid_zone(g, cfg.valid_zone_nodes, cfg.valid_zone_nodes);

  const SimulationResult sim = gpe_run(cfg.gpe_run_config(), u0);

  BecReport rep;
  rep.mass_initial = mass_of(g, u0);
  rep.mass_final = mass_of(g, sim.u_final);

  auto record = [&](int step, const CVec &field)
  {
    const double t = step * cfg.dt;
    rep.samples.push_back({step, t, energy_and_mu(g, field, gc, t)});
    write_snapshot(dir / snapshot_filename(step), zone,
                   reconstruct_valid_zone(field, g, t, gc.omega, zone));
  };
  record(0, u0);
  for (const auto &[step, field] : sim.snapshots)
  {
    record(step, field);
  }

  {
    auto os = open_out(dir / "energy.csv");
    os << "step,time,energy,mu,norm\n";
    char buf[160];
    for (const auto &s : rep.samples)
    {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", s.step, s.time, s.energy.energy,
                    s.energy.mu, s.energy.norm);
      os << buf;
    }
  }
  {
    auto os = open_out(dir / "history.csv");
    write_history(os, sim.histories);
  }
  write_meta(cfg, {{"steps", sim.steps},
                   {"iterations", iteration_summary(sim.histories)},
                   {"mass_initial", rep.mass_initial},
                   {"mass_final", rep.mass_final}});
  return rep;
}

}  // namespace osm

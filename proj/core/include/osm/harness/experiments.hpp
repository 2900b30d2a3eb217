// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_HARNESS_EXPERIMENTS_HPP
#define OSM_HARNESS_EXPERIMENTS_HPP

#include <iosfwd>
#include <vector>

#include "osm/harness/config.hpp"

namespace osm
{

inline constexpr int kTableSchemaVersion = 1;

struct SolveReport
{
  SimulationResult result;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double wall_time = 0.0;
};

// Runs the configured simulation and writes history.csv, snap_t<step>.csv and meta.json
// into cfg.output_dir. In gpe mode the fields are rotating-frame values.
SolveReport run_solve(const RunConfig &cfg);

// Same run without touching the filesystem.
SolveReport simulate(const RunConfig &cfg);

// Schwarz iterations of the first time step for cfg with the given N and algorithm.
// N = 1 is a direct solve and reports 0.
int first_step_iterations(const RunConfig &cfg, int subdomains, Algorithm algorithm,
                          double *wall_time = nullptr);

struct IterationRow
{
  int subdomains = 0;
  int classical = 0;
  int preconditioned = 0;
  double time_classical = 0.0;
  double time_preconditioned = 0.0;
};

// First-step counts of both algorithms for each N. Every N must divide the cells in x.
std::vector<IterationRow> run_iteration_table(const RunConfig &cfg, const std::vector<int> &n_list);

enum class SweepParameter
{
  p,
  m
};

struct SweepRow
{
  double value = 0.0;
  int classical = 0;
  int preconditioned = 0;
};

// First-step counts of both algorithms over Robin p (or Pade m) values.
std::vector<SweepRow> run_parameter_sweep(const RunConfig &cfg, SweepParameter parameter,
                                          const std::vector<double> &values);

// Tables as CSV with a "# schema_version=<k>" first line.
void write_iteration_table(std::ostream &os, const std::vector<IterationRow> &rows);
void write_sweep_table(std::ostream &os, SweepParameter parameter, const std::vector<SweepRow> &rows);

struct BecSample
{
  int step = 0;
  double time = 0.0;
  EnergyResult energy;
};

struct BecReport
{
  std::vector<BecSample> samples;  // step 0 first, then each snapshot step
  double mass_initial = 0.0;
  double mass_final = 0.0;
};

// Rotating condensate from a ground-state file (cfg.datum = file) or an analytic datum.
// Writes lab-frame snap_t<step>.csv on the valid zone, energy.csv, history.csv and
// meta.json. FileNotFound when the ground-state file is missing.
BecReport run_bec_dynamics(const RunConfig &cfg);

// meta.json contents: resolved config, seed, versions and a free-form summary.
std::string metadata_json(const RunConfig &cfg, const std::string &summary_json);

}  // namespace osm

#endif  // OSM_HARNESS_EXPERIMENTS_HPP

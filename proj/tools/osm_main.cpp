// SPDX-License-Identifier: Apache-2.0

// Command-line driver: single runs and the scripted experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "osm/error.hpp"
#include "osm/harness/experiments.hpp"

namespace
{

struct Overrides
{
  std::optional<int> nsub;
  std::optional<std::string> tc;
  std::optional<double> p;
  std::optional<int> m;
  std::optional<std::string> precond;
  std::optional<std::string> init;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
};

void apply(const Overrides &o, osm::RunConfig &c)
{
  if (o.nsub)
    c.subdomains = *o.nsub;
  if (o.tc)
    c.tc = *o.tc;
  if (o.p)
    c.p = *o.p;
  if (o.m)
    c.m = *o.m;
  if (o.precond)
    c.schwarz.algorithm = *o.precond == "on" ? osm::Algorithm::preconditioned : osm::Algorithm::classical;
  if (o.init)
    c.schwarz.init = *o.init == "random" ? osm::InitMode::random : osm::InitMode::zero;
  if (o.seed)
    c.schwarz.seed = *o.seed;
  if (o.out)
    c.output_dir = *o.out;
  if (o.mode)
    c.mode = *o.mode == "gpe" ? osm::Mode::gpe : osm::Mode::nls;
  c.validate();
}

osm::RunConfig load(const std::string &path)
{
  return path.empty() ? osm::parse_config("{}") : osm::load_config(path);
}

void print_error(const std::exception &e, int depth = 0)
{
  std::cerr << (depth == 0 ? "error: " : "  caused by: ") << e.what() << "\n";
  try
  {
    std::rethrow_if_nested(e);
  }
  catch (const std::exception &inner)
  {
    print_error(inner, depth + 1);
  }
}

void write_table_meta(const osm::RunConfig &cfg, const std::string &experiment)
{
  std::ofstream(cfg.output_dir / "meta.json")
      << osm::metadata_json(cfg, "{\"experiment\": \"" + experiment + "\"}") << "\n";
}

std::ofstream open_table(const osm::RunConfig &cfg)
{
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream os(cfg.output_dir / "table.csv");
  if (!os)
  {
    throw osm::Error("cannot write " + (cfg.output_dir / "table.csv").string());
  }
  return os;
}

int run_experiment(const std::string &which, osm::RunConfig cfg)
{
  if (which == "table1")
  {
    const auto rows = osm::run_iteration_table(cfg, cfg.n_list);
    auto os = open_table(cfg);
    osm::write_iteration_table(os, rows);
    osm::write_iteration_table(std::cout, rows);
  }
  else if (which == "psweep" || which == "msweep")
  {
    const auto param = which == "psweep" ? osm::SweepParameter::p : osm::SweepParameter::m;
    std::vector<double> values = cfg.p_list;
    if (param == osm::SweepParameter::m)
    {
      values.assign(cfg.m_list.begin(), cfg.m_list.end());
    }
    const auto rows = osm::run_parameter_sweep(cfg, param, values);
    auto os = open_table(cfg);
    osm::write_sweep_table(os, param, rows);
    osm::write_sweep_table(std::cout, param, rows);
  }
  else
  {
    const auto rep = osm::run_bec_dynamics(cfg);
    std::printf("mass drift %.3e, %zu snapshots in %s\n",
                std::abs(rep.mass_final - rep.mass_initial) / rep.mass_initial, rep.samples.size(),
                cfg.output_dir.string().c_str());
    return 0;
  }
  write_table_meta(cfg, which);
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Optimized Schwarz solver for Schroedinger and Gross-Pitaevskii equations"};
  app.require_subcommand(1);

  std::string config;
  Overrides o;
  auto *solve = app.add_subcommand("solve", "run one simulation");
  solve->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
  solve->add_option("--nsub", o.nsub, "number of subdomains");
  solve->add_option("--tc", o.tc, "transmission condition")->check(CLI::IsMember({"robin", "pade"}));
  solve->add_option("--p", o.p, "Robin parameter");
  solve->add_option("--m", o.m, "Pade order");
  solve->add_option("--precond", o.precond, "preconditioned iteration")->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--init", o.init, "initial interface vector")->check(CLI::IsMember({"zero", "random"}));
  solve->add_option("--seed", o.seed, "seed of the random interface vector");
  solve->add_option("--out", o.out, "output directory");
  solve->add_option("--mode", o.mode, "equation")->check(CLI::IsMember({"nls", "gpe"}));

  std::string which;
  std::string exp_config;
  std::optional<std::string> exp_out;
  auto *exp = app.add_subcommand("experiment", "run a scripted study");
  exp->add_option("name", which, "study")->required()->check(CLI::IsMember({"table1", "psweep", "msweep", "bec"}));
  exp->add_option("--config", exp_config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*solve)
    {
      osm::RunConfig cfg = load(config);
      apply(o, cfg);
      const auto r = osm::run_solve(cfg);
      std::printf("%d steps, %.3f s, mass drift %.3e, output in %s\n", r.result.steps, r.wall_time,
                  std::abs(r.mass_final - r.mass_initial) / r.mass_initial, cfg.output_dir.string().c_str());
      return 0;
    }
    osm::RunConfig cfg = load(exp_config);
    if (exp_out)
    {
      cfg.output_dir = *exp_out;
    }
    return run_experiment(which, cfg);
  }
  catch (const osm::ConfigError &e)
  {
    print_error(e);
    return 2;
  }
  catch (const std::exception &e)
  {
    print_error(e);
    return 1;
  }
}

// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_HARNESS_CONFIG_HPP
#define OSM_HARNESS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "osm/gpe/gpe.hpp"
#include "osm/schwarz/solver.hpp"

namespace osm
{

enum class Mode
{
  nls,
  gpe
};

// Initial datum of a run.
enum class Datum
{
  moving_gaussian,  // exp(-x^2 - y^2 - 0.5 i x)
  trap_gaussian,    // pi^{-1/4} exp(-(x^2 + 2 y^2) / 2)
  file              // snapshot CSV at datum_file, normalized in gpe mode
};

//
// One run, read from a JSON document. Missing keys keep the defaults below; unknown
// keys are rejected so typos do not silently fall back to defaults.
//
struct RunConfig
{
  Mode mode = Mode::nls;

  double x_left = -16.0, x_right = 16.0;
  double y_bottom = -8.0, y_top = 8.0;
  double dx = 1.0 / 32, dy = 1.0 / 8;
  double dt = 0.01;
  double t_final = 0.01;

  int subdomains = 2;
  std::string tc = "pade";  // robin | pade
  double p = 15.0;
  int m = 2;
  double theta = std::numbers::pi / 4;
  bool include_a0 = true;
  OuterBoundary outer = OuterBoundary::transmission;

  SchwarzConfig schwarz;
  LocalOptions local;

  // f(u) = nls_beta |u|^2 in nls mode.
  double nls_beta = 1.0;
  GpeConfig gpe;  // gpe mode; dt and t_final are taken from the fields above

  Datum datum = Datum::moving_gaussian;
  std::string datum_file;

  std::filesystem::path output_dir = "out";
  // Steps (1-based) written as snap_t<step>.csv; empty writes the last step only.
  std::vector<int> snapshot_steps;

  // Experiment lists.
  std::vector<int> n_list{2, 4, 8};
  std::vector<double> p_list{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::vector<int> m_list{1, 2, 3, 4, 5, 6, 7, 8};
  Index valid_zone_nodes = 65;  // per direction, bec experiment

  // Throws ConfigError naming the offending field.
  void validate() const;

  Grid grid() const;
  TransmissionSpec spec() const;
  ProblemSetup problem() const;  // nls mode
  GpeConfig gpe_config() const;  // gpe with dt and t_final filled in
  GpeRunConfig gpe_run_config() const;
  int steps() const;
};

RunConfig parse_config(std::string_view json_text);
// FileNotFound when the file is missing.
RunConfig load_config(const std::filesystem::path &path);
// Fully resolved config as a JSON document; parse_config(dump_config(c)) gives c back.
std::string dump_config(const RunConfig &cfg);

// Initial datum on the run grid.
CVec initial_datum(const RunConfig &cfg);

}  // namespace osm

#endif  // OSM_HARNESS_CONFIG_HPP

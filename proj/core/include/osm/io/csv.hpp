// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_IO_CSV_HPP
#define OSM_IO_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "osm/fem/grid.hpp"
#include "osm/schwarz/interface_vector.hpp"
#include "osm/schwarz/solver.hpp"

namespace osm
{

// time_step,iteration,update_norm; iterations counted from 1.
void write_history(std::ostream &os, const std::vector<ConvergenceHistory> &histories);

// x,y,re,im in node order (x fastest), values at %.17g so a read gives the same bits.
void write_snapshot(std::ostream &os, const Grid &g, const CVec &u);
void write_snapshot(const std::filesystem::path &path, const Grid &g, const CVec &u);
std::string snapshot_filename(int index);

struct Snapshot
{
  Grid grid;
  CVec values;
};

// Throws FileNotFound for a missing file and ConfigError for a malformed one.
Snapshot read_snapshot(const std::filesystem::path &path);
Snapshot read_snapshot(std::istream &is);

// side,subdomain,node,re,im with side "left" or "right"; only stored traces appear.
void write_interface_dump(std::ostream &os, const InterfaceVector &g);

// x,y,density with density = |u|^2.
void write_density(std::ostream &os, const Grid &g, const CVec &u);

}  // namespace osm

#endif  // OSM_IO_CSV_HPP

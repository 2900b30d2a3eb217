// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_SCHWARZ_DECOMPOSITION_HPP
#define OSM_SCHWARZ_DECOMPOSITION_HPP

#include <vector>

#include "osm/fem/grid.hpp"

namespace osm
{

//
// N vertical strips of equal width without overlap. Neighbouring strips duplicate the
// shared node line; strip j starts at global column offset(j).
//
struct Decomposition
{
  Grid global;
  int n = 1;
  std::vector<Grid> grids;
  std::vector<Index> offsets;

  int size() const { return n; }
  const Grid &grid(int j) const { return grids[static_cast<std::size_t>(j)]; }
  bool equal_subdomains() const;

  // Local field of subdomain j cut from a global nodal field.
  CVec restrict_field(int j, const CVec &global_field) const;
  Eigen::VectorXd restrict_field(int j, const Eigen::VectorXd &global_field) const;
  // Global field from local ones; interface nodes take the mean of both sides.
  CVec glue(const std::vector<CVec> &local) const;
};

// Throws ConfigError naming the nearest valid counts when (n_x - 1) is not divisible by n.
Decomposition decompose(const Grid &global, int n);

}  // namespace osm

#endif  // OSM_SCHWARZ_DECOMPOSITION_HPP

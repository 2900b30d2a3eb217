// SPDX-License-Identifier: Apache-2.0

#include "osm/schwarz/decomposition.hpp"

#include <string>

#include "osm/error.hpp"

namespace osm
{

Decomposition decompose(const Grid &global, int n)
{
  global.validate();
  if (n < 1)
  {
    throw ConfigError("subdomain count must be at least 1");
  }
  const Index cells = global.n_x - 1;
  if (cells % n != 0 || cells / n < 1)
  {
    int below = n, above = n;
    while (below > 1 && cells % below != 0)
      --below;
    while (above < cells && cells % above != 0)
      ++above;
    throw ConfigError("cannot split " + std::to_string(cells) + " cells into " +
                      std::to_string(n) + " equal strips; nearest valid counts are " +
                      std::to_string(below) + " and " + std::to_string(above));
  }
  Decomposition d;
  d.global = global;
  d.n = n;
  const Index width = cells / n;
  for (int j = 0; j < n; ++j)
  {
    const Index off = j * width;
    Grid g = Grid::from_spacing(global.x(off), global.dx, width + 1, global.y_bottom, global.dy,
                                global.n_y);
    // Pin the interface coordinates to the global node positions so neighbours agree.
    g.x_right = (j + 1 == n) ? global.x_right : global.x(off + width);
    g.y_top = global.y_top;
    if (j == 0)
    {
      g.x_left = global.x_left;
    }
    d.grids.push_back(g);
    d.offsets.push_back(off);
  }
  return d;
}

bool Decomposition::equal_subdomains() const
{
  for (const auto &g : grids)
  {
    if (!same_shape(g, grids.front()))
    {
      return false;
    }
  }
  return true;
}

CVec Decomposition::restrict_field(int j, const CVec &global_field) const
{
  if (global_field.size() != global.num_nodes())
  {
    throw DimensionError("global field size does not match the grid");
  }
  const Grid &g = grid(j);
  CVec out(g.num_nodes());
  for (Index jy = 0; jy < g.n_y; ++jy)
  {
    for (Index i = 0; i < g.n_x; ++i)
    {
      out[g.node(i, jy)] = global_field[global.node(offsets[j] + i, jy)];
    }
  }
  return out;
}

Eigen::VectorXd Decomposition::restrict_field(int j, const Eigen::VectorXd &global_field) const
{
  return restrict_field(j, CVec(global_field.cast<Complex>())).real();
}

CVec Decomposition::glue(const std::vector<CVec> &local) const
{
  if (static_cast<int>(local.size()) != n)
  {
    throw DimensionError("glue expects one field per subdomain");
  }
  CVec out = CVec::Zero(global.num_nodes());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(global.num_nodes());
  for (int j = 0; j < n; ++j)
  {
    const Grid &g = grid(j);
    if (local[j].size() != g.num_nodes())
    {
      throw DimensionError("local field size does not match subdomain " + std::to_string(j));
    }
    for (Index jy = 0; jy < g.n_y; ++jy)
    {
      for (Index i = 0; i < g.n_x; ++i)
      {
        const Index k = global.node(offsets[j] + i, jy);
        out[k] += local[j][g.node(i, jy)];
        count[k] += 1.0;
      }
    }
  }
  for (Index k = 0; k < out.size(); ++k)
  {
    out[k] /= count[k];
  }
  return out;
}

}  // namespace osm

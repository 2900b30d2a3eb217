// SPDX-License-Identifier: Apache-2.0

#include "osm/fem/grid.hpp"

#include <cmath>
#include <string>

#include "osm/error.hpp"

namespace osm
{

Grid Grid::from_bounds(double x_left, double x_right, double y_bottom, double y_top, Index n_x,
                       Index n_y)
{
  Grid g{x_left, x_right, y_bottom, y_top, n_x, n_y, 0.0, 0.0};
  if (n_x < 2 || n_y < 2)
  {
    throw ConfigError("grid needs at least 2 nodes per direction, got " + std::to_string(n_x) +
                      "x" + std::to_string(n_y));
  }
  g.dx = (x_right - x_left) / static_cast<double>(n_x - 1);
  g.dy = (y_top - y_bottom) / static_cast<double>(n_y - 1);
  g.validate();
  return g;
}

Grid Grid::from_spacing(double x_left, double dx, Index n_x, double y_bottom, double dy,
                        Index n_y)
{
  Grid g{x_left,
         x_left + dx * static_cast<double>(n_x - 1),
         y_bottom,
         y_bottom + dy * static_cast<double>(n_y - 1),
         n_x,
         n_y,
         dx,
         dy};
  g.validate();
  return g;
}

Grid Grid::from_mesh_size(double x_left, double x_right, double y_bottom, double y_top, double dx,
                          double dy)
{
  if (!(dx > 0.0) || !(dy > 0.0))
  {
    throw ConfigError("mesh sizes must be positive");
  }
  const auto nx = static_cast<Index>(std::llround((x_right - x_left) / dx)) + 1;
  const auto ny = static_cast<Index>(std::llround((y_top - y_bottom) / dy)) + 1;
  return from_bounds(x_left, x_right, y_bottom, y_top, nx, ny);
}

void Grid::validate() const
{
  if (n_x < 2 || n_y < 2)
  {
    throw ConfigError("grid needs at least 2 nodes per direction");
  }
  if (!(x_right > x_left) || !(y_top > y_bottom) || !(dx > 0.0) || !(dy > 0.0))
  {
    throw ConfigError("grid bounds must be increasing");
  }
}

std::vector<Index> Grid::column_ordering() const
{
  std::vector<Index> perm;
  perm.reserve(static_cast<std::size_t>(num_nodes()));
  for (Index i = 0; i < n_x; ++i)
  {
    for (Index j = 0; j < n_y; ++j)
    {
      perm.push_back(node(i, j));
    }
  }
  return perm;
}

bool same_shape(const Grid &a, const Grid &b)
{
  return a.n_x == b.n_x && a.n_y == b.n_y && a.dx == b.dx && a.dy == b.dy;
}

CVec interpolate(const Grid &g, const std::function<Complex(double, double)> &f)
{
  CVec v(g.num_nodes());
  for (Index j = 0; j < g.n_y; ++j)
  {
    for (Index i = 0; i < g.n_x; ++i)
    {
      v[g.node(i, j)] = f(g.x(i), g.y(j));
    }
  }
  return v;
}

Eigen::VectorXd interpolate_real(const Grid &g, const std::function<double(double, double)> &f)
{
  Eigen::VectorXd v(g.num_nodes());
  for (Index j = 0; j < g.n_y; ++j)
  {
    for (Index i = 0; i < g.n_x; ++i)
    {
      v[g.node(i, j)] = f(g.x(i), g.y(j));
    }
  }
  return v;
}

Complex Nonlinearity::operator()(Complex v) const
{
  switch (kind)
  {
    case Kind::none:
      return 0.0;
    case Kind::cubic:
      return beta * std::norm(v);
    case Kind::callback:
      return fn(v);
  }
  return 0.0;
}

CVec Nonlinearity::evaluate(const CVec &v) const
{
  CVec out(v.size());
  for (Index k = 0; k < v.size(); ++k)
  {
    out[k] = (*this)(v[k]);
  }
  return out;
}

PotentialField PotentialField::zero(const Grid &g, Nonlinearity f)
{
  return {Eigen::VectorXd::Zero(g.num_nodes()), std::move(f)};
}

}  // namespace osm

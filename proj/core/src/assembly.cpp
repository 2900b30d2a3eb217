// SPDX-License-Identifier: Apache-2.0

#include "osm/fem/assembly.hpp"

#include <array>
#include <cmath>
#include <string>

#include "osm/error.hpp"

namespace osm
{

namespace
{

using Mat2 = std::array<std::array<double, 2>, 2>;
using Tensor2 = std::array<std::array<std::array<double, 2>, 2>, 2>;

constexpr Mat2 kMass1{{{2.0 / 6.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 6.0}}};  // times h
constexpr Mat2 kStiff1{{{1.0, -1.0}, {-1.0, 1.0}}};                        // times 1/h

// int_0^1 N_a N_b N_c ds for the two linear shape functions, by 2-point Gauss (exact for
// cubics).
Tensor2 triple_1d()
{
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> pts{0.5 - g, 0.5 + g};
  Tensor2 t{};
  for (double s : pts)
  {
    const std::array<double, 2> n{1.0 - s, s};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          t[a][b][c] += 0.5 * n[a] * n[b] * n[c];
  }
  return t;
}

const Tensor2 &triple()
{
  static const Tensor2 t = triple_1d();
  return t;
}

// Cell (i, j) local nodes in the order (0,0), (1,0), (0,1), (1,1).
std::array<Index, 4> cell_nodes(const Grid &g, Index i, Index j)
{
  return {g.node(i, j), g.node(i + 1, j), g.node(i, j + 1), g.node(i + 1, j + 1)};
}

template <class ElementFn>
ComplexSparseMatrix assemble_cells(const Grid &g, ElementFn element)
{
  g.validate();
  TripletBuilder b(g.num_nodes(), g.num_nodes());
  b.reserve(static_cast<std::size_t>(16 * (g.n_x - 1) * (g.n_y - 1)));
  for (Index j = 0; j + 1 < g.n_y; ++j)
  {
    for (Index i = 0; i + 1 < g.n_x; ++i)
    {
      const auto nodes = cell_nodes(g, i, j);
      for (int a = 0; a < 4; ++a)
      {
        for (int c = 0; c < 4; ++c)
        {
          b.add(nodes[a], nodes[c], element(nodes, a, c));
        }
      }
    }
  }
  return std::move(b).build();
}

void check_sides(Sides sides)
{
  if (sides.empty())
  {
    throw ConfigError("boundary assembly needs at least one side");
  }
}

void check_length(const Grid &g, const CVec &w)
{
  if (w.size() != g.num_nodes())
  {
    throw DimensionError("nodal field has " + std::to_string(w.size()) + " values, grid has " +
                         std::to_string(g.num_nodes()) + " nodes");
  }
}

// Embeds a line matrix (n_y x n_y) on the given vertical lines.
ComplexSparseMatrix embed_lines(const Grid &g, Sides sides,
                                const std::function<ComplexSparseMatrix(Side)> &line)
{
  check_sides(sides);
  TripletBuilder b(g.num_nodes(), g.num_nodes());
  for (Side s : {Side::left, Side::right})
  {
    if ((s == Side::left && !sides.left) || (s == Side::right && !sides.right))
    {
      continue;
    }
    const auto nodes = line_nodes(g, s);
    const ComplexSparseMatrix l = line(s);
    const auto off = l.row_offsets();
    const auto col = l.col_indices();
    const auto val = l.values();
    for (Index r = 0; r < l.rows(); ++r)
    {
      for (Index k = off[r]; k < off[r + 1]; ++k)
      {
        b.add(nodes[r], nodes[col[k]], val[k]);
      }
    }
  }
  return std::move(b).build();
}

}  // namespace

ComplexSparseMatrix assemble_mass(const Grid &g)
{
  const double dx = g.dx, dy = g.dy;
  return assemble_cells(g,
                        [dx, dy](const std::array<Index, 4> &, int a, int c)
                        {
                          return Complex(kMass1[a % 2][c % 2] * dx * kMass1[a / 2][c / 2] * dy);
                        });
}

ComplexSparseMatrix assemble_stiffness(const Grid &g)
{
  const double dx = g.dx, dy = g.dy;
  return assemble_cells(g,
                        [dx, dy](const std::array<Index, 4> &, int a, int c)
                        {
                          const int ax = a % 2, cx = c % 2, ay = a / 2, cy = c / 2;
                          return Complex(kStiff1[ax][cx] / dx * kMass1[ay][cy] * dy +
                                         kMass1[ax][cx] * dx * kStiff1[ay][cy] / dy);
                        });
}

ComplexSparseMatrix assemble_generalized_mass(const Grid &g, const CVec &w)
{
  check_length(g, w);
  const double area = g.dx * g.dy;
  const Tensor2 &t = triple();
  return assemble_cells(g,
                        [&](const std::array<Index, 4> &nodes, int a, int c)
                        {
                          Complex sum = 0.0;
                          for (int e = 0; e < 4; ++e)
                          {
                            sum += w[nodes[e]] * (t[a % 2][c % 2][e % 2] * t[a / 2][c / 2][e / 2]);
                          }
                          return sum * area;
                        });
}

ComplexSparseMatrix assemble_generalized_mass(const Grid &g, const PotentialField &w)
{
  return assemble_generalized_mass(g, CVec(w.values.cast<Complex>()));
}

CVec apply_generalized_mass(const Grid &g, const CVec &w, const CVec &x)
{
  check_length(g, w);
  check_length(g, x);
  const double area = g.dx * g.dy;
  const Tensor2 &t = triple();
  // Element tensor E[a][c][e] = T[ax][cx][ex] T[ay][cy][ey].
  std::array<std::array<std::array<double, 4>, 4>, 4> e{};
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k)
        e[a][c][k] = t[a % 2][c % 2][k % 2] * t[a / 2][c / 2][k / 2] * area;
  CVec y = CVec::Zero(g.num_nodes());
  for (Index j = 0; j + 1 < g.n_y; ++j)
  {
    for (Index i = 0; i + 1 < g.n_x; ++i)
    {
      const auto nodes = cell_nodes(g, i, j);
      std::array<Complex, 4> wl, xl;
      for (int k = 0; k < 4; ++k)
      {
        wl[k] = w[nodes[k]];
        xl[k] = x[nodes[k]];
      }
      for (int a = 0; a < 4; ++a)
      {
        Complex sum = 0.0;
        for (int c = 0; c < 4; ++c)
        {
          Complex wc = 0.0;
          for (int k = 0; k < 4; ++k)
            wc += e[a][c][k] * wl[k];
          sum += wc * xl[c];
        }
        y[nodes[a]] += sum;
      }
    }
  }
  return y;
}

ComplexSparseMatrix line_mass(Index n, double h)
{
  TripletBuilder b(n, n);
  for (Index k = 0; k + 1 < n; ++k)
  {
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        b.add(k + a, k + c, kMass1[a][c] * h);
  }
  return std::move(b).build();
}

ComplexSparseMatrix line_stiffness(Index n, double h)
{
  TripletBuilder b(n, n);
  for (Index k = 0; k + 1 < n; ++k)
  {
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        b.add(k + a, k + c, kStiff1[a][c] / h);
  }
  return std::move(b).build();
}

ComplexSparseMatrix line_generalized_mass(const CVec &w, double h)
{
  const Index n = w.size();
  const Tensor2 &t = triple();
  TripletBuilder b(n, n);
  for (Index k = 0; k + 1 < n; ++k)
  {
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        b.add(k + a, k + c, (w[k] * t[a][c][0] + w[k + 1] * t[a][c][1]) * h);
  }
  return std::move(b).build();
}

std::vector<Index> line_nodes(const Grid &g, Side side)
{
  const Index i = (side == Side::left) ? 0 : g.n_x - 1;
  std::vector<Index> nodes(static_cast<std::size_t>(g.n_y));
  for (Index j = 0; j < g.n_y; ++j)
  {
    nodes[j] = g.node(i, j);
  }
  return nodes;
}

ComplexSparseMatrix assemble_boundary_mass(const Grid &g, Sides sides)
{
  return embed_lines(g, sides, [&](Side) { return line_mass(g.n_y, g.dy); });
}

ComplexSparseMatrix assemble_boundary_stiffness(const Grid &g, Sides sides)
{
  return embed_lines(g, sides, [&](Side) { return line_stiffness(g.n_y, g.dy); });
}

ComplexSparseMatrix assemble_generalized_boundary_mass(const Grid &g, const CVec &w, Sides sides)
{
  check_length(g, w);
  return embed_lines(g, sides,
                     [&](Side s)
                     {
                       const auto nodes = line_nodes(g, s);
                       CVec trace(g.n_y);
                       for (Index j = 0; j < g.n_y; ++j)
                       {
                         trace[j] = w[nodes[j]];
                       }
                       return line_generalized_mass(trace, g.dy);
                     });
}

ComplexSparseMatrix restriction(const Grid &g, Side side)
{
  g.validate();
  const auto nodes = line_nodes(g, side);
  TripletBuilder b(g.n_y, g.num_nodes());
  for (Index j = 0; j < g.n_y; ++j)
  {
    b.add(j, nodes[j], 1.0);
  }
  return std::move(b).build();
}

ComplexSparseMatrix restriction_both(const Grid &g)
{
  g.validate();
  TripletBuilder b(2 * g.n_y, g.num_nodes());
  for (Side s : {Side::left, Side::right})
  {
    const auto nodes = line_nodes(g, s);
    const Index offset = (s == Side::left) ? 0 : g.n_y;
    for (Index j = 0; j < g.n_y; ++j)
    {
      b.add(offset + j, nodes[j], 1.0);
    }
  }
  return std::move(b).build();
}

}  // namespace osm

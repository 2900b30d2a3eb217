// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_FEM_ASSEMBLY_HPP
#define OSM_FEM_ASSEMBLY_HPP

#include "osm/fem/grid.hpp"
#include "osm/linalg/sparse_matrix.hpp"

namespace osm
{

enum class Side
{
  left,
  right
};

// Set of vertical boundary lines.
struct Sides
{
  bool left = false;
  bool right = false;

  static Sides both() { return {true, true}; }
  static Sides only(Side s) { return {s == Side::left, s == Side::right}; }
  bool empty() const { return !left && !right; }
};

// Volume matrices on the whole grid.
ComplexSparseMatrix assemble_mass(const Grid &g);
ComplexSparseMatrix assemble_stiffness(const Grid &g);
// Integral of w * phi_a * phi_b with w interpolated from nodal values.
ComplexSparseMatrix assemble_generalized_mass(const Grid &g, const CVec &w);
ComplexSparseMatrix assemble_generalized_mass(const Grid &g, const PotentialField &w);
// M_w x without forming M_w.
CVec apply_generalized_mass(const Grid &g, const CVec &w, const CVec &x);

// Boundary matrices on the vertical lines x = x_left / x_right, embedded in the full
// node space.
ComplexSparseMatrix assemble_boundary_mass(const Grid &g, Sides sides);
ComplexSparseMatrix assemble_boundary_stiffness(const Grid &g, Sides sides);
// w holds nodal values on the whole grid; only the boundary-line values are used.
ComplexSparseMatrix assemble_generalized_boundary_mass(const Grid &g, const CVec &w, Sides sides);

// n_y x num_nodes boolean matrix picking the nodes of one vertical boundary line, bottom
// to top.
ComplexSparseMatrix restriction(const Grid &g, Side side);
// (Q_l; Q_r), 2 n_y x num_nodes.
ComplexSparseMatrix restriction_both(const Grid &g);

// 1D line matrices in the trace space of one vertical line (n nodes, spacing h).
ComplexSparseMatrix line_mass(Index n, double h);
ComplexSparseMatrix line_stiffness(Index n, double h);
ComplexSparseMatrix line_generalized_mass(const CVec &w, double h);

// Node indices of one vertical line, bottom to top.
std::vector<Index> line_nodes(const Grid &g, Side side);

}  // namespace osm

#endif  // OSM_FEM_ASSEMBLY_HPP

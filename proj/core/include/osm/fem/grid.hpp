// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_FEM_GRID_HPP
#define OSM_FEM_GRID_HPP

#include <functional>
#include <vector>

#include "osm/linalg/sparse_matrix.hpp"

namespace osm
{

// Uniform rectangular Q1 mesh. Node (i, j) has index j * n_x + i, i along x.
struct Grid
{
  double x_left = 0.0;
  double x_right = 1.0;
  double y_bottom = 0.0;
  double y_top = 1.0;
  Index n_x = 2;
  Index n_y = 2;
  double dx = 1.0;
  double dy = 1.0;

  // Spacing derived from the bounds.
  static Grid from_bounds(double x_left, double x_right, double y_bottom, double y_top,
                          Index n_x, Index n_y);
  // Bounds derived from the spacing; used for strips cut out of a larger grid so the
  // spacing is inherited bit for bit.
  static Grid from_spacing(double x_left, double dx, Index n_x, double y_bottom, double dy,
                           Index n_y);
  // Node counts chosen so the spacing is (close to) the requested one.
  static Grid from_mesh_size(double x_left, double x_right, double y_bottom, double y_top,
                             double dx, double dy);

  void validate() const;

  Index num_nodes() const { return n_x * n_y; }
  Index node(Index i, Index j) const { return j * n_x + i; }
  double x(Index i) const { return x_left + static_cast<double>(i) * dx; }
  double y(Index j) const { return y_bottom + static_cast<double>(j) * dy; }
  double width() const { return x_right - x_left; }
  double height() const { return y_top - y_bottom; }

  // Permutation listing nodes column by column (y fastest). For strips that are much
  // wider than tall this is the short-bandwidth ordering.
  std::vector<Index> column_ordering() const;
};

bool same_shape(const Grid &a, const Grid &b);

// Samples f at every node.
CVec interpolate(const Grid &g, const std::function<Complex(double, double)> &f);
Eigen::VectorXd interpolate_real(const Grid &g, const std::function<double(double, double)> &f);

// Nonlinear coefficient f(v) in the local equation (... + f(v) v).
struct Nonlinearity
{
  enum class Kind
  {
    none,
    cubic,    // f(v) = beta |v|^2
    callback  // f(v) = fn(v), pointwise
  };
  Kind kind = Kind::none;
  double beta = 0.0;
  std::function<Complex(Complex)> fn;

  static Nonlinearity none() { return {}; }
  static Nonlinearity cubic(double beta) { return {Kind::cubic, beta, {}}; }
  static Nonlinearity custom(std::function<Complex(Complex)> fn)
  {
    return {Kind::callback, 0.0, std::move(fn)};
  }

  // True when f vanishes identically.
  bool is_zero() const { return kind == Kind::none || (kind == Kind::cubic && beta == 0.0); }
  Complex operator()(Complex v) const;
  CVec evaluate(const CVec &v) const;
};

// Nodal potential W plus the nonlinearity tag.
struct PotentialField
{
  Eigen::VectorXd values;
  Nonlinearity f;

  static PotentialField zero(const Grid &g, Nonlinearity f = {});
  bool is_zero() const { return values.size() == 0 || values.isZero(0.0); }
};

}  // namespace osm

#endif  // OSM_FEM_GRID_HPP

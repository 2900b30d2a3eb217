// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_LINALG_KRYLOV_HPP
#define OSM_LINALG_KRYLOV_HPP

#include <functional>
#include <optional>

#include "osm/linalg/sparse_matrix.hpp"

namespace osm
{

using LinearOperator = std::function<CVec(const CVec &)>;

enum class KrylovMethod
{
  gmres,
  bicgstab
};

struct KrylovConfig
{
  KrylovMethod method = KrylovMethod::gmres;
  double tolerance = 1e-12;  // relative to ||b||
  int max_iterations = 1000;
  int restart = 50;          // GMRES only

  void validate() const;
};

struct KrylovResult
{
  CVec x;
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||, recomputed from the returned x
};

// Solves A x = b from a zero initial guess. With a preconditioner M the iteration runs on
// A M^{-1} y = b (right preconditioning) so the monitored residual is the true one.
// Throws NotConverged carrying the best iterate when the iteration cap is reached.
KrylovResult krylov_solve(const LinearOperator &apply, const CVec &b, const KrylovConfig &cfg,
                          const std::optional<LinearOperator> &precond = std::nullopt);

}  // namespace osm

#endif  // OSM_LINALG_KRYLOV_HPP

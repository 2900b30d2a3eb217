// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test programs.

#ifndef OSM_TESTS_SUPPORT_HPP
#define OSM_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "osm/linalg/sparse_matrix.hpp"

namespace osm::testing
{

inline CVec random_vector(Index n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVec v(n);
  for (Index k = 0; k < n; ++k)
  {
    v[k] = Complex(u(rng), u(rng));
  }
  return v;
}

// Random banded complex matrix with a dominant diagonal.
inline ComplexSparseMatrix random_banded(Index n, Index half_band, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TripletBuilder b(n, n);
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = std::max<Index>(0, i - half_band); j <= std::min(n - 1, i + half_band); ++j)
    {
      Complex v(u(rng), u(rng));
      if (i == j)
      {
        v += Complex(4.0 * static_cast<double>(half_band) + 2.0, 1.0);
      }
      b.add(i, j, v);
    }
  }
  return std::move(b).build();
}

// Random sparse matrix with scattered pattern plus a strong diagonal.
inline ComplexSparseMatrix random_sparse(Index n, int per_row, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  TripletBuilder b(n, n);
  for (Index i = 0; i < n; ++i)
  {
    b.add(i, i, Complex(per_row + 2.0 + u(rng), u(rng)));
    for (int k = 0; k < per_row; ++k)
    {
      b.add(i, pick(rng), Complex(u(rng), u(rng)));
    }
  }
  return std::move(b).build();
}

inline double max_abs_diff(const CMat &a, const CMat &b)
{
  return (a - b).cwiseAbs().maxCoeff();
}

inline double rel_error(const CVec &a, const CVec &b)
{
  const double nb = b.norm();
  return nb == 0.0 ? (a - b).norm() : (a - b).norm() / nb;
}

}  // namespace osm::testing

#endif  // OSM_TESTS_SUPPORT_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_LINALG_LU_HPP
#define OSM_LINALG_LU_HPP

#include <span>
#include <utility>
#include <vector>

#include "osm/linalg/sparse_matrix.hpp"

namespace osm
{

enum class Ordering
{
  automatic,  // natural or reverse Cuthill-McKee, whichever gives the cheaper band
  natural,
  reverse_cuthill_mckee,
  custom      // LUOptions::permutation
};

struct LUOptions
{
  // |U(k,k)| at or below this value is reported as singular.
  double pivot_threshold = 1e-14;
  Ordering ordering = Ordering::automatic;
  // For Ordering::custom: position k of the factored matrix holds original unknown
  // permutation[k].
  std::vector<Index> permutation;
};

//
// Banded LU with partial pivoting of a symmetrically permuted sparse matrix,
// P A P^T = L U. The band is found from the sparsity pattern after permutation.
// Immutable after construction; solve() allocates its own scratch, so concurrent solves
// on one factorization are safe.
//
class LUFactorization
{
public:
  LUFactorization() = default;

  Index size() const { return n_; }
  Index lower_bandwidth() const { return kl_; }
  Index upper_bandwidth() const { return ku_; }
  std::span<const Index> permutation() const { return perm_; }

  CVec solve(const CVec &b) const;
  // Solves for every column of B.
  void solve_in_place(CMat &b) const;

  // Raw factor storage, exposed for determinism checks.
  std::span<const Complex> factors() const { return band_; }

private:
  friend LUFactorization lu_factorize(const ComplexSparseMatrix &a, const LUOptions &options);

  Index n_ = 0;
  Index kl_ = 0;
  Index ku_ = 0;
  Index ldab_ = 1;
  std::vector<Index> perm_;
  std::vector<Complex> band_;
  std::vector<int> ipiv_;
};

LUFactorization lu_factorize(const ComplexSparseMatrix &a, const LUOptions &options = {});
CVec lu_solve(const LUFactorization &f, const CVec &b);

// Reverse Cuthill-McKee ordering of the symmetrized pattern of a square matrix.
std::vector<Index> reverse_cuthill_mckee(const ComplexSparseMatrix &a);

// (lower, upper) bandwidth of P A P^T for the given ordering.
std::pair<Index, Index> bandwidths(const ComplexSparseMatrix &a, std::span<const Index> perm);

}  // namespace osm

#endif  // OSM_LINALG_LU_HPP

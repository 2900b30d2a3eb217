// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_LINALG_SPARSE_MATRIX_HPP
#define OSM_LINALG_SPARSE_MATRIX_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace osm
{

using Complex = std::complex<double>;
using Index = std::int64_t;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct Triplet
{
  Index row;
  Index col;
  Complex value;
};

//
// Compressed-row complex sparse matrix. Column indices are strictly increasing inside
// each row and duplicates are summed at construction. Immutable once built.
//
class ComplexSparseMatrix
{
public:
  ComplexSparseMatrix() = default;

  // All-zero matrix of the given shape.
  ComplexSparseMatrix(Index nrows, Index ncols);

  // Duplicate (row, col) pairs are summed. Entries are kept even when the sum is zero,
  // so the structural pattern does not depend on cancellation.
  static ComplexSparseMatrix from_triplets(Index nrows, Index ncols,
                                          std::vector<Triplet> triplets);

  static ComplexSparseMatrix identity(Index n);
  static ComplexSparseMatrix from_dense(const CMat &dense, double drop_tolerance = 0.0);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const Complex> values() const { return values_; }

  // Entry lookup by binary search; zero when not stored.
  Complex coeff(Index row, Index col) const;

  CVec operator*(const CVec &x) const;
  // y += alpha * A x
  void mult_add(const CVec &x, CVec &y, Complex alpha = 1.0) const;

  ComplexSparseMatrix operator*(const ComplexSparseMatrix &other) const;
  ComplexSparseMatrix transpose() const;
  ComplexSparseMatrix scaled(Complex alpha) const;

  CMat to_dense() const;

  // Largest |A(i,j) - A(j,i)|, the complex-symmetric (not Hermitian) defect.
  double max_asymmetry() const;
  double max_abs() const;

  // Text dump: header `nrows ncols nnz`, then `row col re im` per stored entry.
  void dump(std::ostream &os) const;
  static ComplexSparseMatrix load(std::istream &is);

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<Complex> values_;
};

// alpha * A + beta * B with union pattern.
ComplexSparseMatrix add(const ComplexSparseMatrix &a, const ComplexSparseMatrix &b,
                        Complex alpha = 1.0, Complex beta = 1.0);

// Coordinate-list staging buffer for assembly.
class TripletBuilder
{
public:
  TripletBuilder(Index nrows, Index ncols) : nrows_(nrows), ncols_(ncols) {}
  void add(Index row, Index col, Complex value) { entries_.push_back({row, col, value}); }
  void reserve(std::size_t n) { entries_.reserve(n); }
  ComplexSparseMatrix build() &&;

private:
  Index nrows_;
  Index ncols_;
  std::vector<Triplet> entries_;
};

}  // namespace osm

#endif  // OSM_LINALG_SPARSE_MATRIX_HPP

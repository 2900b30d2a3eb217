// SPDX-License-Identifier: Apache-2.0

#include "osm/linalg/sparse_matrix.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "osm/error.hpp"

namespace osm
{

ComplexSparseMatrix::ComplexSparseMatrix(Index nrows, Index ncols)
  : nrows_(nrows), ncols_(ncols), row_offsets_(static_cast<std::size_t>(nrows) + 1, 0)
{
  if (nrows < 0 || ncols < 0)
  {
    throw DimensionError("negative matrix dimension");
  }
}

ComplexSparseMatrix ComplexSparseMatrix::from_triplets(Index nrows, Index ncols,
                                                      std::vector<Triplet> triplets)
{
  ComplexSparseMatrix m(nrows, ncols);
  for (const auto &t : triplets)
  {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
    {
      throw DimensionError("triplet (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") outside " + std::to_string(nrows) +
                           "x" + std::to_string(ncols));
    }
  }
  // Stable sort keeps the summation order of duplicates fixed, so assembly is
  // bit-reproducible.
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet &a, const Triplet &b)
                   { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t k = 0;
  for (Index r = 0; r < nrows; ++r)
  {
    while (k < triplets.size() && triplets[k].row == r)
    {
      const Index c = triplets[k].col;
      Complex sum = 0.0;
      while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c)
      {
        sum += triplets[k].value;
        ++k;
      }
      m.col_indices_.push_back(c);
      m.values_.push_back(sum);
    }
    m.row_offsets_[r + 1] = static_cast<Index>(m.values_.size());
  }
  return m;
}

ComplexSparseMatrix ComplexSparseMatrix::identity(Index n)
{
  TripletBuilder b(n, n);
  for (Index i = 0; i < n; ++i)
  {
    b.add(i, i, 1.0);
  }
  return std::move(b).build();
}

ComplexSparseMatrix ComplexSparseMatrix::from_dense(const CMat &dense, double drop_tolerance)
{
  TripletBuilder b(dense.rows(), dense.cols());
  for (Index i = 0; i < dense.rows(); ++i)
  {
    for (Index j = 0; j < dense.cols(); ++j)
    {
      if (std::abs(dense(i, j)) > drop_tolerance)
      {
        b.add(i, j, dense(i, j));
      }
    }
  }
  return std::move(b).build();
}

Complex ComplexSparseMatrix::coeff(Index row, Index col) const
{
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col)
  {
    return 0.0;
  }
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

CVec ComplexSparseMatrix::operator*(const CVec &x) const
{
  CVec y = CVec::Zero(nrows_);
  mult_add(x, y);
  return y;
}

void ComplexSparseMatrix::mult_add(const CVec &x, CVec &y, Complex alpha) const
{
  if (x.size() != ncols_ || y.size() != nrows_)
  {
    throw DimensionError("sparse matvec: operand sizes " + std::to_string(x.size()) + "/" +
                         std::to_string(y.size()) + " for " + std::to_string(nrows_) + "x" +
                         std::to_string(ncols_));
  }
  for (Index r = 0; r < nrows_; ++r)
  {
    Complex sum = 0.0;
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      sum += values_[k] * x[col_indices_[k]];
    }
    y[r] += alpha * sum;
  }
}

ComplexSparseMatrix ComplexSparseMatrix::operator*(const ComplexSparseMatrix &other) const
{
  if (ncols_ != other.nrows_)
  {
    throw DimensionError("sparse product: inner dimensions differ");
  }
  TripletBuilder b(nrows_, other.ncols_);
  for (Index r = 0; r < nrows_; ++r)
  {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      const Index mid = col_indices_[k];
      for (Index q = other.row_offsets_[mid]; q < other.row_offsets_[mid + 1]; ++q)
      {
        b.add(r, other.col_indices_[q], values_[k] * other.values_[q]);
      }
    }
  }
  return std::move(b).build();
}

ComplexSparseMatrix ComplexSparseMatrix::transpose() const
{
  TripletBuilder b(ncols_, nrows_);
  b.reserve(values_.size());
  for (Index r = 0; r < nrows_; ++r)
  {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      b.add(col_indices_[k], r, values_[k]);
    }
  }
  return std::move(b).build();
}

ComplexSparseMatrix ComplexSparseMatrix::scaled(Complex alpha) const
{
  ComplexSparseMatrix m = *this;
  for (auto &v : m.values_)
  {
    v *= alpha;
  }
  return m;
}

CMat ComplexSparseMatrix::to_dense() const
{
  CMat d = CMat::Zero(nrows_, ncols_);
  for (Index r = 0; r < nrows_; ++r)
  {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      d(r, col_indices_[k]) += values_[k];
    }
  }
  return d;
}

double ComplexSparseMatrix::max_asymmetry() const
{
  if (nrows_ != ncols_)
  {
    throw DimensionError("asymmetry of a non-square matrix");
  }
  double worst = 0.0;
  for (Index r = 0; r < nrows_; ++r)
  {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      worst = std::max(worst, std::abs(values_[k] - coeff(col_indices_[k], r)));
    }
  }
  return worst;
}

double ComplexSparseMatrix::max_abs() const
{
  double worst = 0.0;
  for (const auto &v : values_)
  {
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

void ComplexSparseMatrix::dump(std::ostream &os) const
{
  os << nrows_ << ' ' << ncols_ << ' ' << nnz() << '\n';
  os << std::setprecision(17);
  for (Index r = 0; r < nrows_; ++r)
  {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      os << r << ' ' << col_indices_[k] << ' ' << values_[k].real() << ' '
         << values_[k].imag() << '\n';
    }
  }
}

ComplexSparseMatrix ComplexSparseMatrix::load(std::istream &is)
{
  Index nrows = 0, ncols = 0, nnz = 0;
  if (!(is >> nrows >> ncols >> nnz))
  {
    throw Error("matrix dump: bad header");
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nnz));
  for (Index k = 0; k < nnz; ++k)
  {
    Index r = 0, c = 0;
    double re = 0.0, im = 0.0;
    if (!(is >> r >> c >> re >> im))
    {
      throw Error("matrix dump: truncated at entry " + std::to_string(k));
    }
    t.push_back({r, c, {re, im}});
  }
  return from_triplets(nrows, ncols, std::move(t));
}

ComplexSparseMatrix add(const ComplexSparseMatrix &a, const ComplexSparseMatrix &b,
                        Complex alpha, Complex beta)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
  {
    throw DimensionError("sparse add: shapes differ");
  }
  TripletBuilder out(a.rows(), a.cols());
  out.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  for (const auto *m : {&a, &b})
  {
    const Complex s = (m == &a) ? alpha : beta;
    const auto off = m->row_offsets();
    const auto col = m->col_indices();
    const auto val = m->values();
    for (Index r = 0; r < m->rows(); ++r)
    {
      for (Index k = off[r]; k < off[r + 1]; ++k)
      {
        out.add(r, col[k], s * val[k]);
      }
    }
  }
  return std::move(out).build();
}

ComplexSparseMatrix TripletBuilder::build() &&
{
  return ComplexSparseMatrix::from_triplets(nrows_, ncols_, std::move(entries_));
}

}  // namespace osm

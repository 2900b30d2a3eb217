// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_SCHWARZ_INTERFACE_VECTOR_HPP
#define OSM_SCHWARZ_INTERFACE_VECTOR_HPP

#include <cstdint>

#include "osm/linalg/sparse_matrix.hpp"

namespace osm
{

//
// Incoming fluxes of all subdomains, (r_0, l_1, r_1, l_2, ..., r_{N-2}, l_{N-1}) with
// 0-based subdomain indices. l_0 and r_{N-1} are always zero and not stored.
// Ownership: r_0 with worker 0, l_j and r_j with worker j, l_{N-1} with worker N-1.
//
class InterfaceVector
{
public:
  InterfaceVector() = default;
  InterfaceVector(int subdomains, Index n_y);
  InterfaceVector(int subdomains, Index n_y, CVec data);

  static InterfaceVector random(int subdomains, Index n_y, std::uint64_t seed);

  int subdomains() const { return n_; }
  Index trace_length() const { return n_y_; }
  Index size() const { return data_.size(); }
  const CVec &data() const { return data_; }
  CVec &data() { return data_; }

  bool has_left(int j) const { return j > 0 && j < n_; }
  bool has_right(int j) const { return j >= 0 && j < n_ - 1; }
  // Zero trace for the absent extreme sides.
  CVec left(int j) const;
  CVec right(int j) const;
  void set_left(int j, const CVec &trace);
  void set_right(int j, const CVec &trace);

  // Offset of the stored block; -1 when absent.
  Index left_offset(int j) const { return has_left(j) ? (2 * j - 1) * n_y_ : -1; }
  Index right_offset(int j) const { return has_right(j) ? 2 * j * n_y_ : -1; }

  // Global l2 norm.
  double norm() const { return data_.norm(); }

private:
  int n_ = 1;
  Index n_y_ = 0;
  CVec data_;
};

}  // namespace osm

#endif  // OSM_SCHWARZ_INTERFACE_VECTOR_HPP

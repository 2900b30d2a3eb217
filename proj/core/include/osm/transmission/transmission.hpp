// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_TRANSMISSION_TRANSMISSION_HPP
#define OSM_TRANSMISSION_TRANSMISSION_HPP

#include <numbers>
#include <string>
#include <vector>

#include "osm/fem/grid.hpp"
#include "osm/linalg/sparse_matrix.hpp"

namespace osm
{

struct PadeCoefficients
{
  int m = 0;
  double theta = 0.0;
  std::vector<Complex> a;  // a[0..m]
  std::vector<Complex> d;  // d[0..m]; d[0] is not used by the operator
};

PadeCoefficients pade_coefficients(int m, double theta = std::numbers::pi / 4);

//
// Robin {p} or Pade {m, theta}. For Pade the sum of a_s in front of the trace starts at
// s = 0 unless include_a0 is cleared.
//
class TransmissionSpec
{
public:
  enum class Kind
  {
    robin,
    pade
  };

  static TransmissionSpec robin(double p);
  static TransmissionSpec pade(int m, double theta = std::numbers::pi / 4, bool include_a0 = true);

  Kind kind() const { return kind_; }
  bool is_robin() const { return kind_ == Kind::robin; }
  bool is_pade() const { return kind_ == Kind::pade; }
  double p() const;
  int m() const;
  double theta() const { return coeffs_.theta; }
  bool include_a0() const { return include_a0_; }
  const PadeCoefficients &coefficients() const;

  // Coefficient multiplying -i * trace: p for Robin, sum of a_s for Pade.
  Complex diagonal_weight() const;
  // Number of auxiliary traces per side (0 for Robin).
  int aux_count() const { return is_pade() ? coeffs_.m : 0; }

  std::string describe() const;

private:
  Kind kind_ = Kind::robin;
  double p_ = 1.0;
  bool include_a0_ = true;
  PadeCoefficients coeffs_;
};

// Discrete transmission operator on one trace. aux holds one trace per s = 1..m (Pade);
// Robin ignores it.
CVec apply_discrete_tc(const TransmissionSpec &spec, const CVec &trace,
                       const std::vector<CVec> &aux = {});

// Matrices of the coupled Pade system on one grid, both vertical sides, with aux
// unknowns ordered (left trace; right trace) for each s.
//   B_s = -i c a_s d_s M^G Q^T                     (num_nodes x 2 n_y)
//   C   = -Q M^G                                   (2 n_y x num_nodes)
//   D_s = Q((2i/dt) M^G - c S^G + M^G_W + d_s M^G) Q^T  (2 n_y x 2 n_y)
// c is the Laplace coefficient.
struct PadeBlocks
{
  std::vector<ComplexSparseMatrix> B;
  ComplexSparseMatrix C;
  std::vector<ComplexSparseMatrix> D;
};

PadeBlocks build_pade_blocks(const Grid &g, const TransmissionSpec &spec, const PotentialField &w,
                             double dt, double laplace_coefficient = 1.0);

// Trace-space part of D_s for one side: (2i/dt) G - c S_line + G_W + d_s G, n_y x n_y.
ComplexSparseMatrix pade_line_operator(const Grid &g, const CVec &w_trace, double dt,
                                       double laplace_coefficient, Complex d);

}  // namespace osm

#endif  // OSM_TRANSMISSION_TRANSMISSION_HPP

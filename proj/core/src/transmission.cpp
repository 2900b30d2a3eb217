// SPDX-License-Identifier: Apache-2.0

#include "osm/transmission/transmission.hpp"

#include <cmath>
#include <sstream>

#include "osm/error.hpp"
#include "osm/fem/assembly.hpp"

namespace osm
{

PadeCoefficients pade_coefficients(int m, double theta)
{
  if (m < 1)
  {
    throw ConfigError("Pade order must be at least 1, got " + std::to_string(m));
  }
  PadeCoefficients c;
  c.m = m;
  c.theta = theta;
  c.a.resize(static_cast<std::size_t>(m) + 1);
  c.d.resize(static_cast<std::size_t>(m) + 1);
  const Complex half_phase = std::polar(1.0, theta / 2);
  const Complex phase = std::polar(1.0, theta);
  for (int s = 0; s <= m; ++s)
  {
    const double angle = (2.0 * s - 1.0) * std::numbers::pi / (4.0 * m);
    const double cs = std::cos(angle);
    const double tn = std::tan(angle);
    c.a[s] = half_phase / (m * cs * cs);
    c.d[s] = phase * (tn * tn);
  }
  return c;
}

TransmissionSpec TransmissionSpec::robin(double p)
{
  if (!(p > 0.0))
  {
    throw ConfigError("Robin parameter p must be positive");
  }
  TransmissionSpec s;
  s.kind_ = Kind::robin;
  s.p_ = p;
  return s;
}

TransmissionSpec TransmissionSpec::pade(int m, double theta, bool include_a0)
{
  TransmissionSpec s;
  s.kind_ = Kind::pade;
  s.coeffs_ = pade_coefficients(m, theta);
  s.include_a0_ = include_a0;
  return s;
}

double TransmissionSpec::p() const
{
  if (!is_robin())
  {
    throw ConfigError("p requested from a Pade transmission condition");
  }
  return p_;
}

int TransmissionSpec::m() const
{
  if (!is_pade())
  {
    throw ConfigError("m requested from a Robin transmission condition");
  }
  return coeffs_.m;
}

const PadeCoefficients &TransmissionSpec::coefficients() const
{
  if (!is_pade())
  {
    throw ConfigError("Pade coefficients requested from a Robin transmission condition");
  }
  return coeffs_;
}

Complex TransmissionSpec::diagonal_weight() const
{
  if (is_robin())
  {
    return p_;
  }
  Complex sum = 0.0;
  for (int s = include_a0_ ? 0 : 1; s <= coeffs_.m; ++s)
  {
    sum += coeffs_.a[s];
  }
  return sum;
}

std::string TransmissionSpec::describe() const
{
  std::ostringstream os;
  if (is_robin())
  {
    os << "robin(p=" << p_ << ")";
  }
  else
  {
    os << "pade(m=" << coeffs_.m << ", theta=" << coeffs_.theta
       << (include_a0_ ? "" : ", a0 excluded") << ")";
  }
  return os.str();
}

CVec apply_discrete_tc(const TransmissionSpec &spec, const CVec &trace, const std::vector<CVec> &aux)
{
  const Complex i(0.0, 1.0);
  if (spec.is_robin())
  {
    return -i * spec.p() * trace;
  }
  const auto &c = spec.coefficients();
  if (static_cast<int>(aux.size()) != c.m)
  {
    throw DimensionError("Pade operator of order " + std::to_string(c.m) + " given " +
                         std::to_string(aux.size()) + " auxiliary traces");
  }
  CVec out = -i * spec.diagonal_weight() * trace;
  for (int s = 1; s <= c.m; ++s)
  {
    if (aux[s - 1].size() != trace.size())
    {
      throw DimensionError("auxiliary trace length differs from the trace");
    }
    out += (i * c.a[s] * c.d[s]) * aux[s - 1];
  }
  return out;
}

ComplexSparseMatrix pade_line_operator(const Grid &g, const CVec &w_trace, double dt,
                                       double laplace_coefficient, Complex d)
{
  const Complex i(0.0, 1.0);
  const auto gm = line_mass(g.n_y, g.dy);
  auto op = add(gm, line_stiffness(g.n_y, g.dy), 2.0 * i / dt + d, -laplace_coefficient);
  if (w_trace.size() != 0 && !w_trace.isZero(0.0))
  {
    op = add(op, line_generalized_mass(w_trace, g.dy));
  }
  return op;
}

PadeBlocks build_pade_blocks(const Grid &g, const TransmissionSpec &spec, const PotentialField &w,
                             double dt, double laplace_coefficient)
{
  if (!spec.is_pade())
  {
    throw ConfigError("Pade blocks requested for a Robin transmission condition");
  }
  if (w.values.size() != 0 && w.values.size() != g.num_nodes())
  {
    throw DimensionError("potential size does not match the grid");
  }
  const Complex i(0.0, 1.0);
  const auto &c = spec.coefficients();
  const auto mg = assemble_boundary_mass(g, Sides::both());
  const auto q = restriction_both(g);
  const auto qt = q.transpose();
  const auto mgqt = mg * qt;

  PadeBlocks blocks;
  blocks.C = (q * mg).scaled(-1.0);

  CVec w_full = CVec::Zero(g.num_nodes());
  if (w.values.size() != 0)
  {
    w_full = w.values.cast<Complex>();
  }
  CVec w_left(g.n_y), w_right(g.n_y);
  const auto ln = line_nodes(g, Side::left), rn = line_nodes(g, Side::right);
  for (Index j = 0; j < g.n_y; ++j)
  {
    w_left[j] = w_full[ln[j]];
    w_right[j] = w_full[rn[j]];
  }
  for (int s = 1; s <= c.m; ++s)
  {
    blocks.B.push_back(mgqt.scaled(-i * laplace_coefficient * c.a[s] * c.d[s]));
    const auto dl = pade_line_operator(g, w_left, dt, laplace_coefficient, c.d[s]);
    const auto dr = pade_line_operator(g, w_right, dt, laplace_coefficient, c.d[s]);
    TripletBuilder b(2 * g.n_y, 2 * g.n_y);
    for (const auto *blk : {&dl, &dr})
    {
      const Index offset = (blk == &dl) ? 0 : g.n_y;
      const auto off = blk->row_offsets();
      const auto col = blk->col_indices();
      const auto val = blk->values();
      for (Index r = 0; r < blk->rows(); ++r)
      {
        for (Index k = off[r]; k < off[r + 1]; ++k)
        {
          b.add(offset + r, offset + col[k], val[k]);
        }
      }
    }
    blocks.D.push_back(std::move(b).build());
  }
  return blocks;
}

}  // namespace osm

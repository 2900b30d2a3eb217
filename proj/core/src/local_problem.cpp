// SPDX-License-Identifier: Apache-2.0

#include "osm/subdomain/local_problem.hpp"

#include <cmath>
#include <string>

#include "osm/error.hpp"

namespace osm
{

namespace
{

const Complex kI(0.0, 1.0);

constexpr std::array<Side, 2> kSides{Side::left, Side::right};

int side_index(Side s)
{
  return s == Side::left ? 0 : 1;
}

double max_abs(const CVec &v)
{
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Adds the dense block `value * blk` at rows/cols given by node lists.
void add_dense(TripletBuilder &b, const std::vector<Index> &rows, const std::vector<Index> &cols,
               const CMat &blk, Complex value)
{
  for (Index r = 0; r < blk.rows(); ++r)
  {
    for (Index c = 0; c < blk.cols(); ++c)
    {
      b.add(rows[r], cols[c], value * blk(r, c));
    }
  }
}

void add_sparse(TripletBuilder &b, const ComplexSparseMatrix &m, Index row0 = 0, Index col0 = 0)
{
  const auto off = m.row_offsets();
  const auto col = m.col_indices();
  const auto val = m.values();
  for (Index r = 0; r < m.rows(); ++r)
  {
    for (Index k = off[r]; k < off[r + 1]; ++k)
    {
      b.add(row0 + r, col0 + col[k], val[k]);
    }
  }
}

}  // namespace

std::vector<CVec> LocalSolution::aux_side(Side side) const
{
  std::vector<CVec> out;
  out.reserve(aux.size());
  for (const auto &a : aux)
  {
    const Index ny = a.size() / 2;
    out.push_back(a.segment(side == Side::left ? 0 : ny, ny));
  }
  return out;
}

LocalProblem::LocalProblem(const Grid &grid, double dt, TransmissionSpec spec, PotentialField w,
                           LocalOptions options)
  : grid_(grid), dt_(dt), spec_(std::move(spec)), w_(std::move(w)), options_(options)
{
  grid_.validate();
  if (!(dt > 0.0))
  {
    throw ConfigError("time step must be positive");
  }
  if (!(options_.laplace_coefficient > 0.0))
  {
    throw ConfigError("Laplace coefficient must be positive");
  }
  if (w_.values.size() == 0)
  {
    w_.values = Eigen::VectorXd::Zero(grid_.num_nodes());
  }
  if (w_.values.size() != grid_.num_nodes())
  {
    throw DimensionError("potential has " + std::to_string(w_.values.size()) +
                         " values, grid has " + std::to_string(grid_.num_nodes()) + " nodes");
  }
  mass_ = assemble_mass(grid_);
  stiffness_ = assemble_stiffness(grid_);
  const auto gram = line_mass(grid_.n_y, grid_.dy).to_dense();
  for (Side s : kSides)
  {
    auto &sd = sides_[side_index(s)];
    sd.nodes = line_nodes(grid_, s);
    sd.gram = gram;
  }
  if (!options_.tc_sides.empty())
  {
    boundary_mass_tc_ = assemble_boundary_mass(grid_, options_.tc_sides);
  }
  else
  {
    boundary_mass_tc_ = ComplexSparseMatrix(grid_.num_nodes(), grid_.num_nodes());
  }
  build();
}

bool LocalProblem::has_transmission(Side side) const
{
  return side == Side::left ? options_.tc_sides.left : options_.tc_sides.right;
}

void LocalProblem::set_potential(const Eigen::VectorXd &w)
{
  if (w.size() != grid_.num_nodes())
  {
    throw DimensionError("potential size does not match the grid");
  }
  w_.values = w;
  build();
}

void LocalProblem::build()
{
  const double c = options_.laplace_coefficient;
  a_ = add(mass_, stiffness_, 2.0 * kI / dt_, -c);
  if (!w_.is_zero())
  {
    a_ = add(a_, assemble_generalized_mass(grid_, CVec(w_.values.cast<Complex>())));
  }

  TripletBuilder kb(grid_.num_nodes(), grid_.num_nodes());
  add_sparse(kb, a_);
  if (!options_.tc_sides.empty())
  {
    add_sparse(kb, boundary_mass_tc_.scaled(kI * c * spec_.diagonal_weight()));
  }
  if (spec_.is_pade())
  {
    const auto &coef = spec_.coefficients();
    for (Side s : kSides)
    {
      auto &sd = sides_[side_index(s)];
      sd.d_lu.clear();
      sd.t = CMat::Zero(grid_.n_y, grid_.n_y);
      CVec w_trace(grid_.n_y);
      for (Index j = 0; j < grid_.n_y; ++j)
      {
        w_trace[j] = w_.values[sd.nodes[j]];
      }
      for (int k = 1; k <= coef.m; ++k)
      {
        const CMat d = pade_line_operator(grid_, w_trace, dt_, c, coef.d[k]).to_dense();
        sd.d_lu.emplace_back(d);
        sd.t += (coef.a[k] * coef.d[k]) * sd.d_lu.back().inverse();
      }
      if (has_transmission(s))
      {
        const CMat gtg = sd.gram * sd.t * sd.gram;
        add_dense(kb, sd.nodes, sd.nodes, gtg, -kI * c);
      }
    }
  }
  k_ = std::move(kb).build();
  lu_ = lu_factorize(k_, {.ordering = Ordering::custom, .permutation = grid_.column_ordering()});
  block_lu_.reset();
  if (spec_.is_pade() && options_.pade_formulation == PadeFormulation::block)
  {
    block_lu_ = lu_factorize(block_matrix());
  }
}

ComplexSparseMatrix LocalProblem::block_matrix() const
{
  if (!spec_.is_pade())
  {
    throw ConfigError("block matrix requested for a Robin transmission condition");
  }
  const double c = options_.laplace_coefficient;
  const auto &coef = spec_.coefficients();
  const Index n = grid_.num_nodes();
  const Index ny = grid_.n_y;
  const Index size = n + coef.m * 2 * ny;
  TripletBuilder b(size, size);
  add_sparse(b, a_);
  if (!options_.tc_sides.empty())
  {
    add_sparse(b, boundary_mass_tc_.scaled(kI * c * spec_.diagonal_weight()));
  }
  CVec w_trace(ny);
  for (int k = 1; k <= coef.m; ++k)
  {
    const Index base = n + (k - 1) * 2 * ny;
    for (Side s : kSides)
    {
      const auto &sd = sides_[side_index(s)];
      const Index off = base + (s == Side::left ? 0 : ny);
      std::vector<Index> aux_idx(static_cast<std::size_t>(ny));
      for (Index j = 0; j < ny; ++j)
      {
        aux_idx[j] = off + j;
        w_trace[j] = w_.values[sd.nodes[j]];
      }
      if (has_transmission(s))
      {
        add_dense(b, sd.nodes, aux_idx, sd.gram, -kI * c * coef.a[k] * coef.d[k]);  // B_s
        add_dense(b, aux_idx, sd.nodes, sd.gram, -1.0);                               // C
      }
      add_sparse(b, pade_line_operator(grid_, w_trace, dt_, c, coef.d[k]), off, off);  // D_s
    }
  }
  return std::move(b).build();
}

CVec LocalProblem::trace(const CVec &v, Side side) const
{
  const auto &nodes = sides_[side_index(side)].nodes;
  CVec t(grid_.n_y);
  for (Index j = 0; j < grid_.n_y; ++j)
  {
    t[j] = v[nodes[j]];
  }
  return t;
}

CVec LocalProblem::boundary_load(Side side, const CVec &trace) const
{
  if (trace.size() != grid_.n_y)
  {
    throw DimensionError("trace has " + std::to_string(trace.size()) + " values, expected " +
                         std::to_string(grid_.n_y));
  }
  CVec out = CVec::Zero(grid_.num_nodes());
  if (!has_transmission(side))
  {
    return out;
  }
  const auto &sd = sides_[side_index(side)];
  const CVec gt = -options_.laplace_coefficient * (sd.gram * trace);
  for (Index j = 0; j < grid_.n_y; ++j)
  {
    out[sd.nodes[j]] += gt[j];
  }
  return out;
}

CVec LocalProblem::load_vector(const CVec &h, const CVec &l, const CVec &r) const
{
  if (h.size() != grid_.num_nodes())
  {
    throw DimensionError("initial field size does not match the grid");
  }
  CVec rhs = (2.0 * kI / dt_) * (mass_ * h);
  rhs += boundary_load(Side::left, l);
  rhs += boundary_load(Side::right, r);
  return rhs;
}

std::vector<CVec> LocalProblem::recover_aux(const CVec &v, const std::vector<CVec> &lag) const
{
  std::vector<CVec> aux;
  if (!spec_.is_pade())
  {
    return aux;
  }
  const Index ny = grid_.n_y;
  const int m = spec_.m();
  for (int k = 0; k < m; ++k)
  {
    CVec phi = CVec::Zero(2 * ny);
    for (Side s : kSides)
    {
      if (!has_transmission(s))
      {
        continue;
      }
      const auto &sd = sides_[side_index(s)];
      const Index off = s == Side::left ? 0 : ny;
      CVec rhs = sd.gram * trace(v, s);
      if (!lag.empty())
      {
        rhs -= lag[k].segment(off, ny);
      }
      phi.segment(off, ny) = sd.d_lu[k].solve(rhs);
    }
    aux.push_back(std::move(phi));
  }
  return aux;
}

CVec LocalProblem::lag_rhs(const std::vector<CVec> &lag) const
{
  CVec out = CVec::Zero(grid_.num_nodes());
  if (lag.empty())
  {
    return out;
  }
  const auto &coef = spec_.coefficients();
  const Index ny = grid_.n_y;
  for (Side s : kSides)
  {
    if (!has_transmission(s))
    {
      continue;
    }
    const auto &sd = sides_[side_index(s)];
    const Index off = s == Side::left ? 0 : ny;
    CVec acc = CVec::Zero(ny);
    for (int k = 1; k <= coef.m; ++k)
    {
      acc += (coef.a[k] * coef.d[k]) * sd.d_lu[k - 1].solve(CVec(lag[k - 1].segment(off, ny)));
    }
    const CVec add_v = (-kI * options_.laplace_coefficient) * (sd.gram * acc);
    for (Index j = 0; j < ny; ++j)
    {
      out[sd.nodes[j]] += add_v[j];
    }
  }
  return out;
}

std::vector<CVec> LocalProblem::lag_terms(const CVec &zeta, const std::vector<CVec> &phi_prev) const
{
  std::vector<CVec> lag;
  if (!spec_.is_pade() || w_.f.is_zero())
  {
    return lag;
  }
  const Index ny = grid_.n_y;
  std::array<ComplexSparseMatrix, 2> gf;
  for (Side s : kSides)
  {
    if (has_transmission(s))
    {
      gf[side_index(s)] = line_generalized_mass(w_.f.evaluate(trace(zeta, s)), grid_.dy);
    }
  }
  for (const auto &phi : phi_prev)
  {
    CVec g = CVec::Zero(2 * ny);
    for (Side s : kSides)
    {
      if (has_transmission(s))
      {
        const Index off = s == Side::left ? 0 : ny;
        g.segment(off, ny) = gf[side_index(s)] * CVec(phi.segment(off, ny));
      }
    }
    lag.push_back(std::move(g));
  }
  return lag;
}

CVec LocalProblem::solve_v(const CVec &rhs, const std::vector<CVec> &lag,
                           std::vector<CVec> *aux) const
{
  if (spec_.is_pade() && block_lu_)
  {
    const Index n = grid_.num_nodes();
    const Index ny = grid_.n_y;
    const int m = spec_.m();
    CVec big = CVec::Zero(n + m * 2 * ny);
    big.head(n) = rhs;
    for (int k = 0; k < m && !lag.empty(); ++k)
    {
      big.segment(n + k * 2 * ny, 2 * ny) = -lag[k];
    }
    const CVec sol = block_lu_->solve(big);
    if (aux)
    {
      aux->clear();
      for (int k = 0; k < m; ++k)
      {
        aux->push_back(sol.segment(n + k * 2 * ny, 2 * ny));
      }
    }
    return sol.head(n);
  }
  CVec v = lu_.solve(spec_.is_pade() ? CVec(rhs + lag_rhs(lag)) : rhs);
  if (aux)
  {
    *aux = recover_aux(v, lag);
  }
  return v;
}

void LocalProblem::solve_columns(CMat &rhs) const
{
  if (rhs.rows() != grid_.num_nodes())
  {
    throw DimensionError("right-hand side rows do not match the grid");
  }
  if (block_lu_)
  {
    const Index n = grid_.num_nodes();
    CMat big = CMat::Zero(block_lu_->size(), rhs.cols());
    big.topRows(n) = rhs;
    block_lu_->solve_in_place(big);
    rhs = big.topRows(n);
    return;
  }
  lu_.solve_in_place(rhs);
}

LocalSolution LocalProblem::solve_linear(const CVec &h, const CVec &l, const CVec &r) const
{
  if (!w_.f.is_zero())
  {
    throw ConfigError("solve_linear called on a problem with a nonlinearity");
  }
  LocalSolution out;
  out.v = solve_v(load_vector(h, l, r), {}, &out.aux);
  out.fixed_point_iterations = 1;
  return out;
}

LocalSolution LocalProblem::solve_nonlinear(const CVec &h, const CVec &l, const CVec &r,
                                            const FixedPointConfig &fp) const
{
  if (!(fp.tolerance > 0.0) || fp.max_iterations < 1)
  {
    throw ConfigError("fixed-point tolerance must be positive and max_iterations at least 1");
  }
  if (w_.f.is_zero())
  {
    LocalSolution out;
    out.v = solve_v(load_vector(h, l, r), {}, &out.aux);
    out.fixed_point_iterations = 1;
    return out;
  }
  const CVec base = load_vector(h, l, r);
  const Index ny = grid_.n_y;
  const int m = spec_.aux_count();

  LocalSolution cur;
  cur.v = h;
  cur.aux.assign(static_cast<std::size_t>(m), CVec::Zero(2 * ny));
  double change = 0.0;
  for (int q = 1; q <= fp.max_iterations; ++q)
  {
    const CVec fz = w_.f.evaluate(cur.v);
    const auto lag = lag_terms(cur.v, cur.aux);
    LocalSolution next;
    switch (options_.nonlinear)
    {
      case NonlinearTreatment::lagged_volume:
      {
        const CVec rhs = base - apply_generalized_mass(grid_, fz, cur.v);
        next.v = solve_v(rhs, lag, &next.aux);
        break;
      }
      case NonlinearTreatment::frozen_volume:
      case NonlinearTreatment::boundary_only:
      {
        const bool volume = options_.nonlinear == NonlinearTreatment::frozen_volume;
        ComplexSparseMatrix extra;
        if (volume)
        {
          extra = assemble_generalized_mass(grid_, fz);
        }
        else if (!options_.tc_sides.empty())
        {
          extra = assemble_generalized_boundary_mass(grid_, fz, options_.tc_sides);
        }
        else
        {
          extra = ComplexSparseMatrix(grid_.num_nodes(), grid_.num_nodes());
        }
        const Index n = grid_.num_nodes();
        if (spec_.is_pade() && options_.pade_formulation == PadeFormulation::block)
        {
          const auto blk = block_matrix();
          TripletBuilder b(blk.rows(), blk.cols());
          add_sparse(b, blk);
          add_sparse(b, extra);
          const auto f = lu_factorize(std::move(b).build());
          CVec big = CVec::Zero(blk.rows());
          big.head(n) = base;
          for (int k = 0; k < m; ++k)
          {
            big.segment(n + k * 2 * ny, 2 * ny) = -lag[k];
          }
          const CVec sol = f.solve(big);
          next.v = sol.head(n);
          for (int k = 0; k < m; ++k)
          {
            next.aux.push_back(sol.segment(n + k * 2 * ny, 2 * ny));
          }
        }
        else
        {
          const auto f = lu_factorize(add(k_, extra), {.ordering = Ordering::custom,
                                                       .permutation = grid_.column_ordering()});
          next.v = f.solve(spec_.is_pade() ? CVec(base + lag_rhs(lag)) : base);
          next.aux = recover_aux(next.v, lag);
        }
        break;
      }
    }
    if (!next.v.allFinite())
    {
      throw Diverged("fixed-point iterate became non-finite at iteration " + std::to_string(q));
    }
    change = max_abs(next.v - cur.v);
    for (int k = 0; k < m; ++k)
    {
      change = std::max(change, max_abs(next.aux[k] - cur.aux[k]));
    }
    next.fixed_point_iterations = q;
    cur = std::move(next);
    if (change <= fp.tolerance)
    {
      return cur;
    }
  }
  throw NotConverged("fixed point did not converge in " + std::to_string(fp.max_iterations) +
                         " iterations (last change " + std::to_string(change) + ")",
                     change, fp.max_iterations, cur.v);
}

LocalSolution solve_local_linear(const LocalProblem &prob, const CVec &h, const CVec &l,
                                 const CVec &r)
{
  return prob.solve_linear(h, l, r);
}

LocalSolution solve_local_nonlinear(const LocalProblem &prob, const CVec &h, const CVec &l,
                                    const CVec &r, const FixedPointConfig &fp)
{
  return prob.solve_nonlinear(h, l, r, fp);
}

CVec advance_time(const CVec &u_prev, const CVec &v)
{
  if (u_prev.size() != v.size())
  {
    throw DimensionError("advance_time: fields of length " + std::to_string(u_prev.size()) +
                         " and " + std::to_string(v.size()));
  }
  return 2.0 * v - u_prev;
}

double mass_norm_squared(const ComplexSparseMatrix &mass, const CVec &u)
{
  return u.dot(mass * u).real();
}

}  // namespace osm

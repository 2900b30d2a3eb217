// SPDX-License-Identifier: Apache-2.0

#include "osm/precond/preconditioner.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include "osm/error.hpp"

namespace osm
{

const CMat &SubdomainBlocks::block(int k) const
{
  switch (k)
  {
    case 1:
      return x1;
    case 2:
      return x2;
    case 3:
      return x3;
    case 4:
      return x4;
    default:
      throw ConfigError("block index must be 1..4, got " + std::to_string(k));
  }
}

SubdomainBlocks build_blocks(const LocalProblem &reference, Sides sides, WorkerPool *pool)
{
  if (!reference.potential().is_zero() || !reference.nonlinearity().is_zero())
  {
    throw ConfigError("preconditioner blocks need a reference problem with V = 0 and f = 0");
  }
  const Index ny = reference.grid().n_y;
  const Index n = reference.grid().num_nodes();
  const auto &spec = reference.spec();

  struct Probe
  {
    Side side;
    Index s;
  };
  std::vector<Probe> probes;
  for (Side side : {Side::left, Side::right})
  {
    if (side == Side::left ? sides.left : sides.right)
    {
      for (Index s = 0; s < ny; ++s)
      {
        probes.push_back({side, s});
      }
    }
  }

  SubdomainBlocks out;
  if (sides.left)
  {
    out.x1 = CMat::Zero(ny, ny);
    out.x3 = CMat::Zero(ny, ny);
  }
  if (sides.right)
  {
    out.x2 = CMat::Zero(ny, ny);
    out.x4 = CMat::Zero(ny, ny);
  }

  const Index total = static_cast<Index>(probes.size());
  const int chunks = static_cast<int>((total + kProbeChunk - 1) / kProbeChunk);
  auto run_chunk = [&](int c)
  {
    const Index first = c * kProbeChunk;
    const Index count = std::min(kProbeChunk, total - first);
    CMat rhs(n, count);
    for (Index k = 0; k < count; ++k)
    {
      const auto &p = probes[first + k];
      rhs.col(k) = reference.boundary_load(p.side, CVec::Unit(ny, p.s));
    }
    reference.solve_columns(rhs);
    for (Index k = 0; k < count; ++k)
    {
      const auto &p = probes[first + k];
      LocalSolution sol;
      sol.v = rhs.col(k);
      sol.aux = reference.recover_aux(sol.v);
      const CVec e = CVec::Unit(ny, p.s);
      const CVec z = CVec::Zero(ny);
      const CVec left = compute_outgoing_flux(spec, reference, sol, Side::left,
                                              p.side == Side::left ? e : z);
      const CVec right = compute_outgoing_flux(spec, reference, sol, Side::right,
                                               p.side == Side::right ? e : z);
      // Each probe owns its columns, so workers never write the same entries.
      if (p.side == Side::left)
      {
        out.x1.col(p.s) = left;
        out.x3.col(p.s) = right;
      }
      else
      {
        out.x2.col(p.s) = left;
        out.x4.col(p.s) = right;
      }
    }
  };
  if (pool)
  {
    pool->run(chunks, run_chunk);
  }
  else
  {
    for (int c = 0; c < chunks; ++c)
    {
      run_chunk(c);
    }
  }
  return out;
}

PreconditionerBlocks build_preconditioner_blocks(SchwarzSolver &solver)
{
  const int n = solver.subdomains();
  if (n < 2)
  {
    throw ConfigError("the interface preconditioner needs at least two subdomains");
  }
  const auto &setup = solver.setup();
  const auto &decomp = solver.decomposition();
  PreconditionerBlocks pb;
  pb.n = n;
  pb.n_y = setup.grid.n_y;
  pb.spec = setup.spec;
  pb.shared = decomp.equal_subdomains() && setup.outer == OuterBoundary::transmission;

  auto reference = [&](int j)
  {
    return LocalProblem(decomp.grid(j), setup.dt, setup.spec, PotentialField::zero(decomp.grid(j)),
                        local_options_for(setup, j));
  };
  if (pb.shared)
  {
    const auto blocks =
        std::make_shared<const SubdomainBlocks>(build_blocks(reference(1), Sides::both(), &solver.pool()));
    pb.per_subdomain.assign(static_cast<std::size_t>(n), blocks);
  }
  else
  {
    for (int j = 0; j < n; ++j)
    {
      const Sides sides{j > 0, j < n - 1};
      pb.per_subdomain.push_back(
          std::make_shared<const SubdomainBlocks>(build_blocks(reference(j), sides, &solver.pool())));
    }
  }
  return pb;
}

BlockOperator::BlockOperator(PreconditionerBlocks blocks) : blocks_(std::move(blocks))
{
  if (blocks_.n < 2)
  {
    throw ConfigError("P = I - L_h needs at least two subdomains");
  }
  if (static_cast<int>(blocks_.per_subdomain.size()) != blocks_.n)
  {
    throw DimensionError("expected blocks for " + std::to_string(blocks_.n) + " subdomains");
  }
  const Index ny = blocks_.n_y;
  for (int j = 0; j < blocks_.n; ++j)
  {
    const auto &b = blocks_.blocks(j);
    const bool left = j > 0, right = j < blocks_.n - 1;
    auto ok = [&](const CMat &m, bool needed)
    { return !needed || (m.rows() == ny && m.cols() == ny); };
    if (!ok(b.x1, left) || !ok(b.x3, left && right) || !ok(b.x2, left && right) ||
        !ok(b.x4, right))
    {
      throw DimensionError("block of subdomain " + std::to_string(j) + " has the wrong size");
    }
  }
}

CVec BlockOperator::apply_L(const CVec &g) const
{
  if (g.size() != size())
  {
    throw DimensionError("interface vector of length " + std::to_string(g.size()) +
                         ", operator size " + std::to_string(size()));
  }
  const int n = blocks_.n;
  const Index ny = blocks_.n_y;
  const InterfaceVector in(n, ny, g);
  CVec out = CVec::Zero(size());
  for (int j = 0; j < n; ++j)
  {
    const auto &b = blocks_.blocks(j);
    const bool left = j > 0, right = j < n - 1;
    if (left)
    {
      auto dst = out.segment(in.right_offset(j - 1), ny);
      dst.noalias() += b.x1 * g.segment(in.left_offset(j), ny);
      if (right)
      {
        dst.noalias() += b.x2 * g.segment(in.right_offset(j), ny);
      }
    }
    if (right)
    {
      auto dst = out.segment(in.left_offset(j + 1), ny);
      dst.noalias() += b.x4 * g.segment(in.right_offset(j), ny);
      if (left)
      {
        dst.noalias() += b.x3 * g.segment(in.left_offset(j), ny);
      }
    }
  }
  return out;
}

CVec BlockOperator::apply(const CVec &g) const
{
  return g - apply_L(g);
}

ComplexSparseMatrix BlockOperator::materialize() const
{
  const int n = blocks_.n;
  const Index ny = blocks_.n_y;
  const InterfaceVector layout(n, ny);
  TripletBuilder t(size(), size());
  for (Index k = 0; k < size(); ++k)
  {
    t.add(k, k, 1.0);
  }
  auto place = [&](Index row0, Index col0, const CMat &m)
  {
    for (Index c = 0; c < ny; ++c)
    {
      for (Index r = 0; r < ny; ++r)
      {
        if (m(r, c) != Complex(0.0))
        {
          t.add(row0 + r, col0 + c, -m(r, c));
        }
      }
    }
  };
  for (int j = 0; j < n; ++j)
  {
    const auto &b = blocks_.blocks(j);
    const bool left = j > 0, right = j < n - 1;
    if (left)
    {
      place(layout.right_offset(j - 1), layout.left_offset(j), b.x1);
      if (right)
      {
        place(layout.right_offset(j - 1), layout.right_offset(j), b.x2);
      }
    }
    if (right)
    {
      place(layout.left_offset(j + 1), layout.right_offset(j), b.x4);
      if (left)
      {
        place(layout.left_offset(j + 1), layout.left_offset(j), b.x3);
      }
    }
  }
  return std::move(t).build();
}

BlockOperator assemble_P(PreconditionerBlocks blocks)
{
  return BlockOperator(std::move(blocks));
}

KrylovResult apply_P_inverse(const BlockOperator &p, const CVec &y, const KrylovConfig &cfg)
{
  if (y.size() != p.size())
  {
    throw DimensionError("right-hand side does not match P");
  }
  return krylov_solve([&p](const CVec &x) { return p.apply(x); }, y, cfg);
}

Preconditioner::Preconditioner(BlockOperator p, KrylovConfig cfg) : p_(std::move(p)), cfg_(cfg)
{
  cfg_.validate();
}

CVec Preconditioner::apply_inverse(const CVec &y) const
{
  return apply_P_inverse(p_, y, cfg_).x;
}

std::shared_ptr<const Preconditioner> install_preconditioner(SchwarzSolver &solver)
{
  auto p = std::make_shared<const Preconditioner>(assemble_P(build_preconditioner_blocks(solver)),
                                                  solver.config().krylov);
  solver.set_preconditioner(p);
  return p;
}

void write_block_dump(std::ostream &os, const PreconditionerBlocks &blocks)
{
  os << "block,row,col,re,im\n";
  char buf[128];
  auto dump = [&](int j, const SubdomainBlocks &b)
  {
    for (int k = 1; k <= 4; ++k)
    {
      const CMat &m = b.block(k);
      const std::string name = "X" + std::to_string(j + 1) + "_" + std::to_string(k);
      for (Index r = 0; r < m.rows(); ++r)
      {
        for (Index c = 0; c < m.cols(); ++c)
        {
          std::snprintf(buf, sizeof buf, ",%td,%td,%.17g,%.17g\n", r, c, m(r, c).real(),
                        m(r, c).imag());
          os << name << buf;
        }
      }
    }
  };
  if (blocks.shared)
  {
    dump(1, blocks.blocks(1));
    return;
  }
  for (int j = 0; j < blocks.n; ++j)
  {
    dump(j, blocks.blocks(j));
  }
}

}  // namespace osm

// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_PRECOND_PRECONDITIONER_HPP
#define OSM_PRECOND_PRECONDITIONER_HPP

#include <iosfwd>
#include <memory>
#include <vector>

#include "osm/linalg/krylov.hpp"
#include "osm/schwarz/solver.hpp"

namespace osm
{

//
// Free-operator blocks of one subdomain j. With incoming (l_j, r_j) and zero data the
// outgoing traces are
//   new r_{j-1} = X1 l_j + X2 r_j,   new l_{j+1} = X3 l_j + X4 r_j,
// X1 and X4 including the -I from the flux update. Blocks of absent sides are empty.
//
struct SubdomainBlocks
{
  CMat x1, x2, x3, x4;

  const CMat &block(int k) const;
};

struct PreconditionerBlocks
{
  int n = 0;
  Index n_y = 0;
  TransmissionSpec spec = TransmissionSpec::robin(1.0);
  // One entry per subdomain; equal subdomains share the reference entry.
  std::vector<std::shared_ptr<const SubdomainBlocks>> per_subdomain;
  bool shared = false;

  const SubdomainBlocks &blocks(int j) const { return *per_subdomain[static_cast<std::size_t>(j)]; }
};

// Probe columns are grouped in chunks of this size; each chunk is one multi-rhs solve.
inline constexpr Index kProbeChunk = 16;

// Probes the four blocks of `reference` (zero potential, no nonlinearity) with 2 n_y
// local solves. `sides` selects which incoming sides are probed. Chunks go round-robin
// over the pool's workers, or run inline without a pool; both give identical bits.
SubdomainBlocks build_blocks(const LocalProblem &reference, Sides sides = Sides::both(),
                             WorkerPool *pool = nullptr);

// All blocks for the solver's decomposition. Equal subdomains with transmission outer
// sides use one reference strip; otherwise every strip is probed on its own.
PreconditionerBlocks build_preconditioner_blocks(SchwarzSolver &solver);

//
// P = I - L_h applied through the block pattern. Interface vector layout follows
// InterfaceVector.
//
class BlockOperator
{
public:
  explicit BlockOperator(PreconditionerBlocks blocks);

  Index size() const { return 2 * (blocks_.n - 1) * blocks_.n_y; }
  const PreconditionerBlocks &blocks() const { return blocks_; }

  CVec apply_L(const CVec &g) const;
  CVec apply(const CVec &g) const;  // (I - L_h) g
  // Explicit sparse P, for checks and small problems.
  ComplexSparseMatrix materialize() const;

private:
  PreconditionerBlocks blocks_;
};

// Throws ConfigError for a single subdomain.
BlockOperator assemble_P(PreconditionerBlocks blocks);

// Solves P x = y by the configured Krylov method.
KrylovResult apply_P_inverse(const BlockOperator &p, const CVec &y, const KrylovConfig &cfg);

class Preconditioner : public InterfacePreconditioner
{
public:
  Preconditioner(BlockOperator p, KrylovConfig cfg);

  CVec apply_inverse(const CVec &y) const override;
  const BlockOperator &op() const { return p_; }
  const KrylovConfig &krylov() const { return cfg_; }

private:
  BlockOperator p_;
  KrylovConfig cfg_;
};

// Builds P for the solver, installs it and returns it.
std::shared_ptr<const Preconditioner> install_preconditioner(SchwarzSolver &solver);

// Text dump `block,row,col,re,im`; block names X<j>_<k> with j counted from 1. Shared
// blocks are written once under the reference index.
void write_block_dump(std::ostream &os, const PreconditionerBlocks &blocks);

}  // namespace osm

#endif  // OSM_PRECOND_PRECONDITIONER_HPP

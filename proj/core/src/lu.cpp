// SPDX-License-Identifier: Apache-2.0

#include "osm/linalg/lu.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "osm/error.hpp"

extern "C"
{
  void zgbtrf_(const int *m, const int *n, const int *kl, const int *ku,
               std::complex<double> *ab, const int *ldab, int *ipiv, int *info);
  void zgbtrs_(const char *trans, const int *n, const int *kl, const int *ku, const int *nrhs,
               const std::complex<double> *ab, const int *ldab, const int *ipiv,
               std::complex<double> *b, const int *ldb, int *info, std::size_t trans_len);
}

namespace osm
{

namespace
{

std::vector<std::vector<Index>> SymmetricAdjacency(const ComplexSparseMatrix &a)
{
  const Index n = a.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  for (Index r = 0; r < n; ++r)
  {
    for (Index k = off[r]; k < off[r + 1]; ++k)
    {
      if (col[k] != r)
      {
        adj[r].push_back(col[k]);
        adj[col[k]].push_back(r);
      }
    }
  }
  for (auto &list : adj)
  {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

// Breadth-first level structure from root restricted to unvisited nodes; returns the
// nodes in visiting order and the start of the last level.
std::pair<std::vector<Index>, std::size_t> Levels(const std::vector<std::vector<Index>> &adj,
                                                  Index root, const std::vector<char> &done)
{
  std::vector<Index> order{root};
  std::vector<char> seen(adj.size(), 0);
  seen[root] = 1;
  std::size_t level_begin = 0;
  std::size_t last_level = 0;
  while (level_begin < order.size())
  {
    last_level = level_begin;
    const std::size_t level_end = order.size();
    for (std::size_t q = level_begin; q < level_end; ++q)
    {
      for (Index nb : adj[order[q]])
      {
        if (!seen[nb] && !done[nb])
        {
          seen[nb] = 1;
          order.push_back(nb);
        }
      }
    }
    level_begin = level_end;
  }
  return {order, last_level};
}

}  // namespace

std::vector<Index> reverse_cuthill_mckee(const ComplexSparseMatrix &a)
{
  if (a.rows() != a.cols())
  {
    throw DimensionError("ordering requires a square matrix");
  }
  const Index n = a.rows();
  const auto adj = SymmetricAdjacency(a);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index start = 0; start < n; ++start)
  {
    if (done[start])
    {
      continue;
    }
    // Pseudo-peripheral root: walk to a minimum-degree node of the deepest level while
    // the eccentricity keeps growing.
    Index root = start;
    auto [levels, last] = Levels(adj, root, done);
    std::size_t depth = levels.size() - last;
    for (int sweep = 0; sweep < 8; ++sweep)
    {
      Index candidate = levels[last];
      for (std::size_t q = last; q < levels.size(); ++q)
      {
        if (adj[levels[q]].size() < adj[candidate].size())
        {
          candidate = levels[q];
        }
      }
      auto [next, next_last] = Levels(adj, candidate, done);
      // Count levels by replaying the traversal depth.
      std::vector<Index> level_of(static_cast<std::size_t>(n), -1);
      level_of[candidate] = 0;
      Index max_level = 0;
      for (Index v : next)
      {
        for (Index nb : adj[v])
        {
          if (!done[nb] && level_of[nb] < 0)
          {
            level_of[nb] = level_of[v] + 1;
            max_level = std::max(max_level, level_of[nb]);
          }
        }
      }
      std::vector<Index> root_level(static_cast<std::size_t>(n), -1);
      root_level[root] = 0;
      Index root_depth = 0;
      for (Index v : levels)
      {
        for (Index nb : adj[v])
        {
          if (!done[nb] && root_level[nb] < 0)
          {
            root_level[nb] = root_level[v] + 1;
            root_depth = std::max(root_depth, root_level[nb]);
          }
        }
      }
      if (max_level <= root_depth)
      {
        break;
      }
      root = candidate;
      levels = std::move(next);
      last = next_last;
      depth = levels.size() - last;
    }
    (void)depth;

    // Cuthill-McKee from root, neighbours by increasing degree.
    const std::size_t begin = order.size();
    order.push_back(root);
    done[root] = 1;
    for (std::size_t q = begin; q < order.size(); ++q)
    {
      std::vector<Index> next;
      for (Index nb : adj[order[q]])
      {
        if (!done[nb])
        {
          done[nb] = 1;
          next.push_back(nb);
        }
      }
      std::stable_sort(next.begin(), next.end(), [&](Index x, Index y)
                       { return adj[x].size() < adj[y].size(); });
      order.insert(order.end(), next.begin(), next.end());
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::pair<Index, Index> bandwidths(const ComplexSparseMatrix &a, std::span<const Index> perm)
{
  const Index n = a.rows();
  std::vector<Index> position(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k)
  {
    position[perm[k]] = k;
  }
  Index kl = 0, ku = 0;
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  for (Index r = 0; r < n; ++r)
  {
    for (Index k = off[r]; k < off[r + 1]; ++k)
    {
      const Index d = position[r] - position[col[k]];
      kl = std::max(kl, d);
      ku = std::max(ku, -d);
    }
  }
  return {kl, ku};
}

LUFactorization lu_factorize(const ComplexSparseMatrix &a, const LUOptions &options)
{
  if (a.rows() != a.cols())
  {
    throw DimensionError("LU of a non-square " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix");
  }
  const Index n = a.rows();
  LUFactorization f;
  f.n_ = n;

  std::vector<Index> natural(static_cast<std::size_t>(n));
  std::iota(natural.begin(), natural.end(), Index{0});
  switch (options.ordering)
  {
    case Ordering::natural:
      f.perm_ = natural;
      break;
    case Ordering::reverse_cuthill_mckee:
      f.perm_ = reverse_cuthill_mckee(a);
      break;
    case Ordering::custom:
    {
      if (static_cast<Index>(options.permutation.size()) != n)
      {
        throw DimensionError("custom ordering has wrong length");
      }
      std::vector<char> hit(static_cast<std::size_t>(n), 0);
      for (Index p : options.permutation)
      {
        if (p < 0 || p >= n || hit[p])
        {
          throw ConfigError("custom ordering is not a permutation");
        }
        hit[p] = 1;
      }
      f.perm_ = options.permutation;
      break;
    }
    case Ordering::automatic:
    {
      auto rcm = reverse_cuthill_mckee(a);
      const auto [nl, nu] = bandwidths(a, natural);
      const auto [rl, ru] = bandwidths(a, rcm);
      f.perm_ = (rl * (2 * rl + ru) < nl * (2 * nl + nu)) ? std::move(rcm) : natural;
      break;
    }
  }
  if (n == 0)
  {
    return f;
  }

  const auto [kl, ku] = bandwidths(a, f.perm_);
  f.kl_ = kl;
  f.ku_ = ku;
  f.ldab_ = 2 * kl + ku + 1;
  if (f.ldab_ * n > std::numeric_limits<int>::max())
  {
    throw ConfigError("band too large for LAPACK indexing: n=" + std::to_string(n) +
                      ", ldab=" + std::to_string(f.ldab_));
  }
  f.band_.assign(static_cast<std::size_t>(f.ldab_ * n), Complex{0.0, 0.0});
  std::vector<Index> position(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k)
  {
    position[f.perm_[k]] = k;
  }
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  for (Index r = 0; r < n; ++r)
  {
    const Index i = position[r];
    for (Index k = off[r]; k < off[r + 1]; ++k)
    {
      const Index j = position[col[k]];
      f.band_[static_cast<std::size_t>(kl + ku + i - j + j * f.ldab_)] += val[k];
    }
  }

  const int in = static_cast<int>(n), ikl = static_cast<int>(kl), iku = static_cast<int>(ku),
            ildab = static_cast<int>(f.ldab_);
  int info = 0;
  f.ipiv_.assign(static_cast<std::size_t>(n), 0);
  zgbtrf_(&in, &in, &ikl, &iku, f.band_.data(), &ildab, f.ipiv_.data(), &info);
  if (info < 0)
  {
    throw Error("zgbtrf: illegal argument " + std::to_string(-info));
  }
  // info > 0 flags an exactly zero U(info, info); the threshold scan below catches it
  // together with tiny pivots.
  for (Index k = 0; k < n; ++k)
  {
    const double pivot = std::abs(f.band_[static_cast<std::size_t>(kl + ku + k * f.ldab_)]);
    if (!(pivot > options.pivot_threshold))
    {
      throw SingularMatrix(static_cast<std::size_t>(k),
                           "singular matrix: pivot " + std::to_string(k) + " (unknown " +
                               std::to_string(f.perm_[k]) + ") has magnitude " +
                               std::to_string(pivot));
    }
  }
  return f;
}

CVec LUFactorization::solve(const CVec &b) const
{
  CMat m = b;
  solve_in_place(m);
  return m.col(0);
}

void LUFactorization::solve_in_place(CMat &b) const
{
  if (b.rows() != n_)
  {
    throw DimensionError("LU solve: right-hand side has " + std::to_string(b.rows()) +
                         " rows, factorization has " + std::to_string(n_));
  }
  if (n_ == 0 || b.cols() == 0)
  {
    return;
  }
  CMat permuted(n_, b.cols());
  for (Index k = 0; k < n_; ++k)
  {
    permuted.row(k) = b.row(perm_[k]);
  }
  const int in = static_cast<int>(n_), ikl = static_cast<int>(kl_),
            iku = static_cast<int>(ku_), ildab = static_cast<int>(ldab_),
            nrhs = static_cast<int>(b.cols()), ldb = static_cast<int>(n_);
  int info = 0;
  const char trans = 'N';
  zgbtrs_(&trans, &in, &ikl, &iku, &nrhs, band_.data(), &ildab, ipiv_.data(), permuted.data(),
          &ldb, &info, 1);
  if (info != 0)
  {
    throw Error("zgbtrs failed with info " + std::to_string(info));
  }
  for (Index k = 0; k < n_; ++k)
  {
    b.row(perm_[k]) = permuted.row(k);
  }
}

CVec lu_solve(const LUFactorization &f, const CVec &b)
{
  return f.solve(b);
}

}  // namespace osm

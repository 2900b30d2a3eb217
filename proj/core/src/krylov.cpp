// SPDX-License-Identifier: Apache-2.0

#include "osm/linalg/krylov.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "osm/error.hpp"

namespace osm
{

void KrylovConfig::validate() const
{
  if (!(tolerance > 0.0))
  {
    throw ConfigError("Krylov tolerance must be positive");
  }
  if (max_iterations < 1)
  {
    throw ConfigError("Krylov max_iterations must be at least 1");
  }
  if (method == KrylovMethod::gmres && restart < 1)
  {
    throw ConfigError("GMRES restart must be at least 1");
  }
}

namespace
{

CVec checked_apply(const LinearOperator &op, const CVec &x)
{
  CVec y = op(x);
  if (y.size() != x.size())
  {
    throw DimensionError("linear operator maps length " + std::to_string(x.size()) + " to " +
                         std::to_string(y.size()));
  }
  return y;
}

CVec precondition(const std::optional<LinearOperator> &m, const CVec &x)
{
  return m ? checked_apply(*m, x) : x;
}

void check_finite(const CVec &v, int iteration)
{
  if (!v.allFinite())
  {
    throw Diverged("Krylov iterate became non-finite at iteration " + std::to_string(iteration));
  }
}

KrylovResult gmres(const LinearOperator &a, const CVec &b, const KrylovConfig &cfg,
                   const std::optional<LinearOperator> &m)
{
  const Index n = b.size();
  const double bnorm = b.norm();
  KrylovResult out;
  out.x = CVec::Zero(n);
  if (bnorm == 0.0)
  {
    return out;
  }
  const int restart = std::min<Index>(cfg.restart, std::max<Index>(n, 1));
  CVec r = b;
  double rel = 1.0;
  int total = 0;
  CVec best = out.x;
  double best_rel = rel;

  while (total < cfg.max_iterations)
  {
    const double beta = r.norm();
    std::vector<CVec> v;
    v.reserve(static_cast<std::size_t>(restart) + 1);
    v.push_back(r / beta);
    CMat h = CMat::Zero(restart + 1, restart);
    std::vector<double> cs(static_cast<std::size_t>(restart));
    std::vector<Complex> sn(static_cast<std::size_t>(restart));
    CVec gvec = CVec::Zero(restart + 1);
    gvec[0] = beta;
    int k = 0;
    bool breakdown = false;
    for (; k < restart && total < cfg.max_iterations; ++k)
    {
      ++total;
      CVec w = checked_apply(a, precondition(m, v[k]));
      const double wnorm0 = w.norm();
      for (int i = 0; i <= k; ++i)
      {
        h(i, k) = v[i].dot(w);  // conj(v_i) . w
        w -= h(i, k) * v[i];
      }
      const double hnext = w.norm();
      h(k + 1, k) = hnext;
      for (int i = 0; i < k; ++i)
      {
        const Complex t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -std::conj(sn[i]) * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const Complex x0 = h(k, k);
      const double y0 = std::abs(h(k + 1, k));
      const double nrm = std::hypot(std::abs(x0), y0);
      if (nrm == 0.0)
      {
        cs[k] = 1.0;
        sn[k] = 0.0;
      }
      else if (std::abs(x0) == 0.0)
      {
        cs[k] = 0.0;
        sn[k] = std::conj(h(k + 1, k)) / y0;
      }
      else
      {
        cs[k] = std::abs(x0) / nrm;
        sn[k] = (x0 / std::abs(x0)) * std::conj(h(k + 1, k)) / nrm;
      }
      h(k, k) = cs[k] * x0 + sn[k] * h(k + 1, k);
      h(k + 1, k) = 0.0;
      gvec[k + 1] = -std::conj(sn[k]) * gvec[k];
      gvec[k] = cs[k] * gvec[k];
      if (hnext <= 1e-14 * std::max(wnorm0, 1e-300))
      {
        breakdown = true;
        ++k;
        break;
      }
      v.push_back(w / hnext);
      if (std::abs(gvec[k + 1]) / bnorm <= cfg.tolerance)
      {
        ++k;
        break;
      }
    }

    // Back substitution on the k x k triangle, skipping exactly singular pivots.
    CVec y = CVec::Zero(k);
    for (int i = k - 1; i >= 0; --i)
    {
      Complex s = gvec[i];
      for (int j = i + 1; j < k; ++j)
      {
        s -= h(i, j) * y[j];
      }
      y[i] = (std::abs(h(i, i)) > 0.0) ? s / h(i, i) : Complex{0.0};
    }
    CVec z = CVec::Zero(n);
    for (int i = 0; i < k; ++i)
    {
      z += y[i] * v[i];
    }
    out.x += precondition(m, z);
    check_finite(out.x, total);
    r = b - checked_apply(a, out.x);
    rel = r.norm() / bnorm;
    if (rel < best_rel)
    {
      best_rel = rel;
      best = out.x;
    }
    if (rel <= cfg.tolerance)
    {
      out.iterations = total;
      out.residual = rel;
      return out;
    }
    if (breakdown && rel >= 0.999 * beta / bnorm)
    {
      // The Krylov space is invariant and contains no progress: the operator is
      // singular on it.
      break;
    }
  }
  throw NotConverged("GMRES did not reach relative residual " + std::to_string(cfg.tolerance) +
                         " (best " + std::to_string(best_rel) + " after " +
                         std::to_string(total) + " iterations)",
                     best_rel, total, best);
}

KrylovResult bicgstab(const LinearOperator &a, const CVec &b, const KrylovConfig &cfg,
                      const std::optional<LinearOperator> &m)
{
  const Index n = b.size();
  const double bnorm = b.norm();
  KrylovResult out;
  out.x = CVec::Zero(n);
  if (bnorm == 0.0)
  {
    return out;
  }
  CVec r = b;
  const CVec rhat = r;
  Complex rho = 1.0, alpha = 1.0, omega = 1.0;
  CVec v = CVec::Zero(n), p = CVec::Zero(n);
  CVec best = out.x;
  double best_rel = 1.0;
  for (int it = 1; it <= cfg.max_iterations; ++it)
  {
    const Complex rho_new = rhat.dot(r);
    if (std::abs(rho_new) == 0.0)
    {
      break;
    }
    const Complex beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    p = r + beta * (p - omega * v);
    const CVec phat = precondition(m, p);
    v = checked_apply(a, phat);
    const Complex denom = rhat.dot(v);
    if (std::abs(denom) == 0.0)
    {
      break;
    }
    alpha = rho / denom;
    const CVec s = r - alpha * v;
    if (s.norm() / bnorm <= cfg.tolerance)
    {
      out.x += alpha * phat;
      r = s;
    }
    else
    {
      const CVec shat = precondition(m, s);
      const CVec t = checked_apply(a, shat);
      const double tt = t.squaredNorm();
      if (tt == 0.0)
      {
        break;
      }
      omega = t.dot(s) / tt;
      out.x += alpha * phat + omega * shat;
      r = s - omega * t;
    }
    check_finite(out.x, it);
    const double rel = r.norm() / bnorm;
    if (rel <= cfg.tolerance)
    {
      // Confirm against the true residual; recurrences drift at tight tolerances.
      const double true_rel = (b - checked_apply(a, out.x)).norm() / bnorm;
      if (true_rel <= cfg.tolerance)
      {
        out.iterations = it;
        out.residual = true_rel;
        return out;
      }
      r = b - checked_apply(a, out.x);
    }
    if (rel < best_rel)
    {
      best_rel = rel;
      best = out.x;
    }
    if (std::abs(omega) == 0.0)
    {
      break;
    }
  }
  throw NotConverged("BiCGStab did not reach relative residual " +
                         std::to_string(cfg.tolerance) + " (best " + std::to_string(best_rel) +
                         ")",
                     best_rel, cfg.max_iterations, best);
}

}  // namespace

KrylovResult krylov_solve(const LinearOperator &apply, const CVec &b, const KrylovConfig &cfg,
                          const std::optional<LinearOperator> &precond)
{
  cfg.validate();
  return cfg.method == KrylovMethod::gmres ? gmres(apply, b, cfg, precond)
                                           : bicgstab(apply, b, cfg, precond);
}

}  // namespace osm

// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include <Eigen/Dense>

#include "doctest.h"
#include "osm/error.hpp"
#include "osm/linalg/krylov.hpp"
#include "osm/linalg/lu.hpp"
#include "support.hpp"

using namespace osm;
using osm::testing::random_banded;
using osm::testing::random_sparse;
using osm::testing::random_vector;
using osm::testing::rel_error;

TEST_CASE("triplet assembly sums duplicates and sorts columns")
{
  TripletBuilder b(2, 3);
  b.add(1, 2, 1.0);
  b.add(0, 1, 2.0);
  b.add(1, 0, 3.0);
  b.add(0, 1, Complex(0.0, 1.0));
  const auto m = std::move(b).build();
  CHECK(m.nnz() == 3);
  CHECK(m.coeff(0, 1) == Complex(2.0, 1.0));
  CHECK(m.coeff(0, 0) == Complex(0.0));
  const auto off = m.row_offsets();
  const auto col = m.col_indices();
  for (Index r = 0; r < m.rows(); ++r)
  {
    for (Index k = off[r] + 1; k < off[r + 1]; ++k)
    {
      CHECK(col[k - 1] < col[k]);
    }
  }
  CHECK_THROWS_AS(ComplexSparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), DimensionError);
}

TEST_CASE("sparse products agree with dense arithmetic")
{
  std::mt19937_64 rng(11);
  const auto a = random_sparse(30, 3, rng);
  const auto b = random_sparse(30, 2, rng);
  const CVec x = random_vector(30, rng);
  CHECK((a * x - a.to_dense() * x).norm() < 1e-13);
  CHECK(osm::testing::max_abs_diff((a * b).to_dense(), a.to_dense() * b.to_dense()) < 1e-13);
  CHECK(osm::testing::max_abs_diff(a.transpose().to_dense(), a.to_dense().transpose()) == 0.0);
  CHECK(osm::testing::max_abs_diff(add(a, b, 2.0, Complex(0, 1)).to_dense(),
                                   2.0 * a.to_dense() + Complex(0, 1) * b.to_dense()) < 1e-14);
}

TEST_CASE("matrix dump round trip")
{
  std::mt19937_64 rng(5);
  const auto a = random_sparse(12, 2, rng);
  std::stringstream ss;
  a.dump(ss);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "12 12 " + std::to_string(a.nnz()));
  ss.seekg(0);
  const auto b = ComplexSparseMatrix::load(ss);
  CHECK(osm::testing::max_abs_diff(a.to_dense(), b.to_dense()) == 0.0);
}

TEST_CASE("lu_factorize: identity gives trivial solve")
{
  const auto f = lu_factorize(ComplexSparseMatrix::identity(7));
  std::mt19937_64 rng(1);
  const CVec b = random_vector(7, rng);
  CHECK((lu_solve(f, b) - b).norm() == 0.0);
}

TEST_CASE("lu_factorize: diagonal complex system")
{
  const auto a = ComplexSparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, Complex(0, 1)}});
  CVec b(2);
  b << 2.0, Complex(0, 1);
  const CVec x = lu_solve(lu_factorize(a), b);
  CHECK(std::abs(x[0] - 1.0) < 1e-15);
  CHECK(std::abs(x[1] - 1.0) < 1e-15);
}

TEST_CASE("lu_factorize: rank-deficient matrix is singular")
{
  const auto a =
      ComplexSparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(lu_factorize(a), SingularMatrix);
  try
  {
    lu_factorize(a);
  }
  catch (const SingularMatrix &e)
  {
    CHECK(e.pivot() == 1);
  }
  // A structurally empty row is caught too.
  const auto z = ComplexSparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {2, 2, 1.0}});
  CHECK_THROWS_AS(lu_factorize(z, {.ordering = Ordering::natural}), SingularMatrix);
}

TEST_CASE("lu_solve: permutation matrix swaps entries")
{
  const auto a = ComplexSparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
  CVec b(2);
  b << Complex(1, 2), Complex(-3, 0.5);
  const CVec x = lu_solve(lu_factorize(a), b);
  CHECK(x[0] == b[1]);
  CHECK(x[1] == b[0]);
}

TEST_CASE("lu_solve: length mismatch")
{
  const auto f = lu_factorize(ComplexSparseMatrix::identity(3));
  CHECK_THROWS_AS(lu_solve(f, CVec::Zero(4)), DimensionError);
}

TEST_CASE("lu_solve: random banded 50x50 round trip")
{
  std::mt19937_64 rng(50);
  const auto a = random_banded(50, 4, rng);
  const CVec x = random_vector(50, rng);
  const CVec b = a * x;
  const auto f = lu_factorize(a);
  const CVec y = lu_solve(f, b);
  CHECK(rel_error(y, x) <= 1e-12);
  CHECK((a * y - b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("property: random sparse round trip under every ordering")
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Index n = 5 + static_cast<Index>(rng() % 196);
    const auto a = random_sparse(n, 3, rng);
    const CVec x = random_vector(n, rng);
    const CVec b = a * x;
    for (Ordering o : {Ordering::automatic, Ordering::natural, Ordering::reverse_cuthill_mckee})
    {
      const auto f = lu_factorize(a, {.ordering = o});
      CHECK(rel_error(f.solve(b), x) <= 1e-11);
    }
  }
}

TEST_CASE("property: factorization is deterministic")
{
  std::mt19937_64 rng(3);
  const auto a = random_sparse(120, 4, rng);
  const auto f1 = lu_factorize(a);
  const auto f2 = lu_factorize(a);
  REQUIRE(f1.factors().size() == f2.factors().size());
  CHECK(std::equal(f1.factors().begin(), f1.factors().end(), f2.factors().begin()));
}

TEST_CASE("reverse Cuthill-McKee shrinks a scrambled band")
{
  std::mt19937_64 rng(9);
  const Index n = 80;
  const auto band = random_banded(n, 2, rng);
  std::vector<Index> shuffle(n);
  std::iota(shuffle.begin(), shuffle.end(), Index{0});
  std::shuffle(shuffle.begin(), shuffle.end(), rng);
  TripletBuilder b(n, n);
  const auto off = band.row_offsets();
  const auto col = band.col_indices();
  const auto val = band.values();
  for (Index r = 0; r < n; ++r)
    for (Index k = off[r]; k < off[r + 1]; ++k)
      b.add(shuffle[r], shuffle[col[k]], val[k]);
  const auto a = std::move(b).build();
  const auto perm = reverse_cuthill_mckee(a);
  const auto [kl, ku] = bandwidths(a, perm);
  CHECK(kl <= 4);
  CHECK(ku <= 4);
  std::vector<Index> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (Index k = 0; k < n; ++k)
    CHECK(sorted[k] == k);
}

TEST_CASE("custom ordering must be a permutation")
{
  const auto a = ComplexSparseMatrix::identity(3);
  CHECK_THROWS_AS(lu_factorize(a, {.ordering = Ordering::custom, .permutation = {0, 0, 1}}),
                  ConfigError);
  const auto f = lu_factorize(a, {.ordering = Ordering::custom, .permutation = {2, 0, 1}});
  CHECK(f.permutation()[0] == 2);
}

TEST_CASE("krylov_solve: identity converges in one iteration")
{
  std::mt19937_64 rng(4);
  const CVec b = random_vector(10, rng);
  for (auto method : {KrylovMethod::gmres, KrylovMethod::bicgstab})
  {
    const auto res = krylov_solve([](const CVec &x) { return x; }, b, {.method = method});
    CHECK(res.iterations == 1);
    CHECK((res.x - b).norm() <= 1e-14 * b.norm());
  }
}

TEST_CASE("krylov_solve: diagonal operator")
{
  CVec d(10);
  for (int k = 0; k < 10; ++k)
    d[k] = k + 1.0;
  const CVec b = CVec::Ones(10);
  for (auto method : {KrylovMethod::gmres, KrylovMethod::bicgstab})
  {
    const auto res =
        krylov_solve([&](const CVec &x) { return CVec(d.cwiseProduct(x)); }, b, {.method = method});
    for (int k = 0; k < 10; ++k)
      CHECK(std::abs(res.x[k] - 1.0 / (k + 1.0)) < 1e-11);
    CHECK(res.residual <= 1e-12);
  }
}

TEST_CASE("krylov_solve: zero operator does not converge")
{
  const CVec b = CVec::Ones(5);
  for (auto method : {KrylovMethod::gmres, KrylovMethod::bicgstab})
  {
    CHECK_THROWS_AS(krylov_solve([](const CVec &x) { return CVec(CVec::Zero(x.size())); }, b,
                                 {.method = method, .max_iterations = 20}),
                    NotConverged);
  }
}

TEST_CASE("krylov_solve: iteration cap reports best iterate")
{
  std::mt19937_64 rng(8);
  const auto a = random_sparse(100, 6, rng);
  const CVec b = random_vector(100, rng);
  try
  {
    krylov_solve([&](const CVec &x) { return CVec(a * x); }, b,
                 {.tolerance = 1e-15, .max_iterations = 2});
    FAIL("expected NotConverged");
  }
  catch (const NotConverged &e)
  {
    CHECK(e.best().size() == 100);
    CHECK(e.residual() < 1.0);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("property: GMRES and BiCGStab agree with LU")
{
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial)
  {
    const auto a = random_sparse(150, 4, rng);
    const CVec b = random_vector(150, rng);
    const CVec x = lu_factorize(a).solve(b);
    const auto op = [&](const CVec &v) { return CVec(a * v); };
    const auto g = krylov_solve(op, b, {.method = KrylovMethod::gmres, .restart = 20});
    const auto s = krylov_solve(op, b, {.method = KrylovMethod::bicgstab});
    CHECK(rel_error(g.x, x) < 1e-10);
    CHECK(rel_error(s.x, x) < 1e-10);
    CHECK(g.residual <= 1e-12);
    CHECK(s.residual <= 1e-12);
  }
}

TEST_CASE("right preconditioning with the exact inverse converges at once")
{
  std::mt19937_64 rng(12);
  const auto a = random_sparse(60, 4, rng);
  const auto f = lu_factorize(a);
  const CVec b = random_vector(60, rng);
  const auto res = krylov_solve([&](const CVec &v) { return CVec(a * v); }, b, {},
                                LinearOperator([&](const CVec &v) { return f.solve(v); }));
  CHECK(res.iterations <= 2);
  CHECK(res.residual <= 1e-12);
}

TEST_CASE("Krylov configuration is validated")
{
  CHECK_THROWS_AS(krylov_solve([](const CVec &x) { return x; }, CVec::Ones(2), {.tolerance = 0.0}),
                  ConfigError);
  CHECK_THROWS_AS(
      krylov_solve([](const CVec &x) { return x; }, CVec::Ones(2), {.max_iterations = 0}),
      ConfigError);
}

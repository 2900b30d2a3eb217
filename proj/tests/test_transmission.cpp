// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "osm/error.hpp"
#include "osm/fem/assembly.hpp"
#include "osm/transmission/transmission.hpp"
#include "support.hpp"

using namespace osm;
using osm::testing::max_abs_diff;
using osm::testing::random_vector;

namespace
{
const double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);
}  // namespace

TEST_CASE("pade_coefficients: m = 1 closed form")
{
  const auto c = pade_coefficients(1, kPi / 4);
  const Complex two_phase = 2.0 * std::polar(1.0, kPi / 8);
  CHECK(std::abs(c.a[0] - two_phase) < 1e-14);
  CHECK(std::abs(c.a[1] - two_phase) < 1e-14);
  CHECK(std::abs(c.d[1] - std::polar(1.0, kPi / 4)) < 1e-14);
}

TEST_CASE("pade_coefficients: m = 2 ratio")
{
  const auto c = pade_coefficients(2, kPi / 4);
  const double t1 = std::tan(kPi / 8), t2 = std::tan(3 * kPi / 8);
  CHECK(std::abs(c.d[2] / c.d[1] - (t2 * t2) / (t1 * t1)) < 1e-12);
  CHECK(std::abs(std::abs(c.d[2] / c.d[1]) - 33.97) < 0.01);
}

TEST_CASE("pade_coefficients: order zero is rejected")
{
  CHECK_THROWS_AS(pade_coefficients(0), ConfigError);
  CHECK_THROWS_AS(TransmissionSpec::robin(0.0), ConfigError);
  CHECK_THROWS_AS(TransmissionSpec::robin(-1.0), ConfigError);
}

TEST_CASE("property: coefficient phases")
{
  for (int m = 1; m <= 100; ++m)
  {
    const double theta = kPi / 4;
    const auto c = pade_coefficients(m, theta);
    REQUIRE(c.a.size() == static_cast<std::size_t>(m) + 1);
    for (int s = 0; s <= m; ++s)
      CHECK(std::abs(std::arg(c.a[s]) - theta / 2) < 1e-14);
    for (int s = 1; s <= m; ++s)
      CHECK(std::abs(std::arg(c.d[s]) - theta) < 1e-14);
  }
}

TEST_CASE("apply_discrete_tc: Robin")
{
  CVec t(2);
  t << 1.0, kI;
  const CVec out = apply_discrete_tc(TransmissionSpec::robin(2.0), t);
  CHECK(std::abs(out[0] - Complex(0, -2)) < 1e-15);
  CHECK(std::abs(out[1] - Complex(2, 0)) < 1e-15);
}

TEST_CASE("apply_discrete_tc: Pade with zero aux and m = 1")
{
  const auto spec = TransmissionSpec::pade(3);
  std::mt19937_64 rng(2);
  const CVec t = random_vector(5, rng);
  const std::vector<CVec> zero(3, CVec::Zero(5));
  Complex sum = 0.0;
  for (auto a : spec.coefficients().a)
    sum += a;
  CHECK((apply_discrete_tc(spec, t, zero) - (-kI * sum * t)).norm() < 1e-13);

  const auto one = TransmissionSpec::pade(1);
  CVec e1 = CVec::Zero(3);
  e1[0] = 1.0;
  const CVec out = apply_discrete_tc(one, e1, {e1});
  const Complex expect = -kI * 4.0 * std::polar(1.0, kPi / 8) +
                         kI * 2.0 * std::polar(1.0, kPi / 8) * std::polar(1.0, kPi / 4);
  CHECK(std::abs(out[0] - expect) < 1e-14);
  CHECK(std::abs(out[1]) == 0.0);

  CHECK_THROWS_AS(apply_discrete_tc(spec, t, {}), DimensionError);
}

TEST_CASE("the a0 switch drops a_0 from the diagonal weight")
{
  const auto with = TransmissionSpec::pade(2);
  const auto without = TransmissionSpec::pade(2, kPi / 4, false);
  CHECK(std::abs(with.diagonal_weight() - without.diagonal_weight() - with.coefficients().a[0]) <
        1e-14);
}

TEST_CASE("property: apply_discrete_tc is linear")
{
  std::mt19937_64 rng(31);
  const auto spec = TransmissionSpec::pade(4);
  const Index n = 9;
  const Complex alpha(0.3, -1.2), beta(-2.0, 0.4);
  for (int trial = 0; trial < 10; ++trial)
  {
    const CVec x = random_vector(n, rng), y = random_vector(n, rng);
    std::vector<CVec> ax, ay, mix;
    for (int s = 0; s < 4; ++s)
    {
      ax.push_back(random_vector(n, rng));
      ay.push_back(random_vector(n, rng));
      mix.push_back(alpha * ax.back() + beta * ay.back());
    }
    const CVec lhs = apply_discrete_tc(spec, alpha * x + beta * y, mix);
    const CVec rhs = alpha * apply_discrete_tc(spec, x, ax) + beta * apply_discrete_tc(spec, y, ay);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13 * rhs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("build_pade_blocks: definitions")
{
  const auto g = Grid::from_bounds(0.0, 1.0, 0.0, 1.0, 5, 4);
  const auto spec = TransmissionSpec::pade(1);
  const double dt = 0.01;
  const auto blocks = build_pade_blocks(g, spec, PotentialField::zero(g), dt);
  REQUIRE(blocks.B.size() == 1);
  REQUIRE(blocks.D.size() == 1);
  const auto mg = assemble_boundary_mass(g, Sides::both());
  const auto q = restriction_both(g);
  CHECK(blocks.B[0].rows() == g.num_nodes());
  CHECK(blocks.B[0].cols() == 2 * g.n_y);
  CHECK(blocks.D[0].rows() == 2 * g.n_y);

  // C = -Q M^G
  CHECK(max_abs_diff(blocks.C.to_dense(), -(q.to_dense() * mg.to_dense())) < 1e-15);

  // B_1 = -i a_1 d_1 M^G Q^T with a_1 d_1 = 2 e^{3 i pi / 8}
  const Complex ad = 2.0 * std::polar(1.0, 3 * kPi / 8);
  CHECK(max_abs_diff(blocks.B[0].to_dense(), -kI * ad * (mg.to_dense() * q.to_dense().transpose())) <
        1e-14);

  // D_1 = Q((2i/dt) M^G - S^G + d_1 M^G) Q^T
  const CMat sg = assemble_boundary_stiffness(g, Sides::both()).to_dense();
  const CMat dref = q.to_dense() *
                    ((2.0 * kI / dt + spec.coefficients().d[1]) * mg.to_dense() - sg) *
                    q.to_dense().transpose();
  CHECK(max_abs_diff(blocks.D[0].to_dense(), dref) < 1e-12);

  CHECK_THROWS_AS(build_pade_blocks(g, TransmissionSpec::robin(1.0), PotentialField::zero(g), dt),
                  ConfigError);
}

TEST_CASE("build_pade_blocks: zero potential gives time-independent D")
{
  const auto g = Grid::from_bounds(-1.0, 1.0, -1.0, 1.0, 6, 7);
  const auto spec = TransmissionSpec::pade(3);
  // Two "time levels" with W = 0 at both.
  const auto b1 = build_pade_blocks(g, spec, PotentialField::zero(g), 0.05);
  const auto b7 = build_pade_blocks(g, spec, PotentialField::zero(g), 0.05);
  for (int s = 0; s < 3; ++s)
    CHECK(max_abs_diff(b1.D[s].to_dense(), b7.D[s].to_dense()) == 0.0);

  // A nonzero potential enters D through the boundary generalized mass.
  PotentialField w = PotentialField::zero(g);
  w.values.setConstant(3.0);
  const auto bw = build_pade_blocks(g, spec, w, 0.05);
  const CMat diff = bw.D[0].to_dense() - b1.D[0].to_dense();
  const CMat gg = (restriction_both(g) * assemble_boundary_mass(g, Sides::both()) *
                   restriction_both(g).transpose())
                      .to_dense();
  CHECK(max_abs_diff(diff, 3.0 * gg) < 1e-13);
}

#include "ars2d/closedform.hpp"

#include <cmath>
#include <iostream>

#include "ars2d/elliptic.hpp"
#include "ars2d/flow.hpp"
#include "doctest.h"

using namespace ars2d;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("nilpotent_geodesic: anchor points") {
  const double K = quarter_period();

  const NilpotentGeodesicParams p{1.0, 1.0};
  const auto at0 = nilpotent_geodesic(p, 0.0);
  CHECK(std::abs(at0.first) < 1e-14);
  CHECK(std::abs(at0.second) < 1e-14);

  const auto cut = nilpotent_geodesic(p, 2.0 * K);
  CHECK(std::abs(cut.first) < 1e-13);
  CHECK(cut.second == doctest::Approx(2.0 * K / 3.0).epsilon(1e-13));
  CHECK(cut.second == doctest::Approx(1.2360497848675813).epsilon(1e-10));

  // orientation: y'(0) = p_y(0)
  const double h = 1e-7;
  for (double sign : {1.0, -1.0}) {
    const NilpotentGeodesicParams q{sign, 2.5};
    const auto a = nilpotent_geodesic(q, h);
    CHECK(a.first / h == doctest::Approx(sign).epsilon(1e-5));
  }
}

TEST_CASE("nilpotent_geodesic: symmetry in p_y0 and in the sign of lambda") {
  const NilpotentGeodesicParams plus{1.0, 1.0}, minus{-1.0, 1.0};
  const NilpotentGeodesicParams neg{1.0, -1.0};
  for (double t : {0.3, 1.1, 2.9, 5.0}) {
    const auto a = nilpotent_geodesic(plus, t);
    const auto b = nilpotent_geodesic(minus, t);
    CHECK(a.first == doctest::Approx(-b.first).epsilon(1e-13));
    CHECK(a.second == doctest::Approx(b.second).epsilon(1e-13));
    const auto c = nilpotent_geodesic(neg, t);
    CHECK(c.first == doctest::Approx(a.first).epsilon(1e-13));
    CHECK(c.second == doctest::Approx(-a.second).epsilon(1e-13));
  }
}

TEST_CASE("closed form satisfies the nilpotent extremal equations") {
  const Model nil = Model::nilpotent();
  const double K = quarter_period();
  for (double lambda : {1.0, 2.0, -1.5}) {
    const NilpotentGeodesicParams p{1.0, lambda};
    const double w = std::sqrt(std::abs(lambda));
    for (int i = 0; i <= 40; ++i) {
      const double t = 4.0 * K / w * i / 40.0;
      const CotangentState s = nilpotent_geodesic_state(p, t);
      const CotangentState v = nilpotent_geodesic_velocity(p, t);
      const CotangentState d = ars_rhs(nil, s);
      CHECK(std::abs(v.y - d.y) <= 1e-9);
      CHECK(std::abs(v.z - d.z) <= 1e-9);
      CHECK(std::abs(v.p_y - d.p_y) <= 1e-9);
      CHECK(std::abs(v.p_z - d.p_z) <= 1e-9);
    }
  }
}

TEST_CASE("oracle equivalence: closed form vs adaptive integration") {
  const Model nil = Model::nilpotent();
  const double K = quarter_period();
  for (double lambda : {0.25, 1.0, 4.0, 25.0}) {
    const double T = 4.0 * K / std::sqrt(lambda);
    const Trajectory tr = integrate(ars_flow(nil), {0, 0, 1, lambda}, T, 1e-12);
    const NilpotentGeodesicParams p{1.0, lambda};
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double t = T * i / 500.0;
      const auto s = tr.sample(t);
      const auto c = nilpotent_geodesic(p, t);
      worst = std::max({worst, std::abs(s[0] - c.first), std::abs(s[1] - c.second)});
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("quasi-homogeneity: (y,z)(t; lambda) = (eta Y(t/eta), eta^3 Z(t/eta))") {
  for (double lambda : {0.25, 4.0, 9.0}) {
    const double eta = 1.0 / std::sqrt(lambda);
    const NilpotentGeodesicParams base{1.0, 1.0};
    const NilpotentGeodesicParams scaled{1.0, lambda};
    for (double s : {0.5, 1.5, 3.0, 6.0}) {
      const auto A = nilpotent_geodesic(scaled, eta * s);
      const auto B = nilpotent_geodesic(base, s);
      CHECK(A.first == doctest::Approx(eta * B.first).epsilon(1e-12));
      CHECK(A.second == doctest::Approx(eta * eta * eta * B.second).epsilon(1e-12));
    }
  }
}

TEST_CASE("nilpotent_cut_time") {
  const double K = quarter_period();
  CHECK(*nilpotent_cut_time(1.0) == doctest::Approx(2.0 * K).epsilon(1e-14));
  CHECK(*nilpotent_cut_time(1.0) == doctest::Approx(3.7081494).epsilon(1e-7));
  CHECK(*nilpotent_cut_time(4.0) == doctest::Approx(K).epsilon(1e-14));
  CHECK(!nilpotent_cut_time(0.0).has_value());
}

TEST_CASE("nilpotent_conjugate_coefficient and its parametric curve") {
  const double K = quarter_period();
  const double alpha = nilpotent_conjugate_coefficient();
  CHECK(alpha == doctest::Approx(K / (2.0 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK(alpha == doctest::Approx(0.6555143885730299).epsilon(1e-12));
  // parametric points (-sqrt2/sqrt(lambda), K/lambda^{3/2}) satisfy z = alpha |y|^3
  for (double lambda : {1.0, 4.0}) {
    const double y = -std::sqrt(2.0) / std::sqrt(lambda);
    const double z = K / std::pow(lambda, 1.5);
    CHECK(z == doctest::Approx(alpha * std::pow(std::abs(y), 3)).epsilon(1e-13));
  }
}

TEST_CASE("grushin closed forms and the heisenberg lift") {
  const auto a = grushin_geodesic(1.0, 1.0, kPi);
  CHECK(std::abs(a.first) < 1e-14);
  CHECK(a.second == doctest::Approx(kPi / 2.0).epsilon(1e-14));
  CHECK(heisenberg_z(1.0, 1.0, kPi) == doctest::Approx(2.0).epsilon(1e-14));

  // cut pair: same planar endpoint, lifted z differs
  for (double py : {0.7, 1.0, 2.3}) {
    const double tbar = kPi / py;
    const auto p = grushin_geodesic(1.0, py, tbar);
    const auto q = grushin_geodesic(-1.0, py, tbar);
    CHECK(p.first == doctest::Approx(q.first).epsilon(1e-13));
    CHECK(p.second == doctest::Approx(q.second).epsilon(1e-13));
    CHECK(heisenberg_z(1.0, py, tbar) == doctest::Approx(-heisenberg_z(-1.0, py, tbar)));
    CHECK(std::abs(heisenberg_z(1.0, py, tbar)) > 0.1);
  }

  // small-time expansion x = p_x t + O(t^3), y = O(t^3)
  const double t = 1e-3;
  const auto s = grushin_geodesic(1.0, 1.0, t);
  CHECK(std::abs(s.first - t) < t * t * t);
  CHECK(std::abs(s.second) < t * t);

  // p_y = 0 straight line
  const auto line = grushin_geodesic(-1.0, 0.0, 2.2);
  CHECK(line.first == doctest::Approx(-2.2));
  CHECK(line.second == 0.0);
  CHECK(heisenberg_z(1.0, 0.0, 2.2) == 0.0);
}

TEST_CASE("grushin closed form matches the integrated flow") {
  for (double py : {0.5, 1.0}) {
    const Trajectory tr = integrate(grushin_flow(), {0, 0, 1, py}, 3.0, 1e-12);
    for (int i = 0; i <= 40; ++i) {
      const double t = 3.0 * i / 40.0;
      const auto s = tr.sample(t);
      const auto c = grushin_geodesic(1.0, py, t);
      CHECK(std::abs(s[0] - c.first) < 1e-9);
      CHECK(std::abs(s[1] - c.second) < 1e-9);
    }
  }
  // heisenberg lift third coordinate
  const Trajectory h = integrate(heisenberg_flow(), {0, 0, 0, 1, 1, 0}, 3.0, 1e-12);
  for (int i = 0; i <= 40; ++i) {
    const double t = 3.0 * i / 40.0;
    CHECK(std::abs(h.sample(t)[2] - heisenberg_z(1.0, 1.0, t)) < 1e-9);
  }
}

TEST_CASE("P_Y^0 quoted expansion formula: report on the constraint set") {
  // The quoted form P(s) = P(0) + P(0)^3 (-1 + sqrt2 dn sn (K+s)) coincides
  // with the integrated momentum only because P(0)^3 = P(0) on |P(0)| = 1;
  // the ODE-integrated value is the ground truth used everywhere else.
  const double K = quarter_period();
  double worst = 0.0;
  for (double p0 : {1.0, -1.0}) {
    const NilpotentGeodesicParams p{p0, 1.0};
    for (int i = 0; i <= 60; ++i) {
      const double s = 4.0 * K * i / 60.0;
      const Jacobi j = jacobi(K + s, modulus_half());
      const double quoted = p0 + p0 * p0 * p0 * (-1.0 + std::sqrt(2.0) * j.dn * j.sn);
      const double actual = nilpotent_geodesic_state(p, s).p_y;
      worst = std::max(worst, std::abs(quoted - actual));
    }
  }
  MESSAGE("max |quoted P_Y^0 - integrated| on |P(0)|=1: ", worst);
  CHECK(worst < 1e-12);
}
